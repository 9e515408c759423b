from .regions import Region, Disk, Annulus, RegionUnion, region_from_dict, radial_union
from .shift import ShiftRegime, ShiftField, wavefront_sequence
from .scene import (Box, Scene, contains_shift, psi, psi_divergence, displacement, with_shift, in_absorber,
                    SIDE_NAMES, LAUNCH_LAWS)
