from .hfunction import HFunction, compute_h_function, map_boundary_source, MAP_MODES
