from .spectrum import SpectrumModel, GaussianCorrelation, IsotropicConstant, Tabulated, load_tabulated_spectrum
from .kernel import (TransportCoefficients, sigma_differential, sigma_total, phase_function, anisotropy_g,
                     h_vector, sphere_area, g_constant, spectral_density, scattering_operator_residual,
                     phase_modulated_integral, phase_modulated_decay, DegenerateMediumError,
                     NearSingularTransportError)
from .sampling import CosineSampler, HenyeyGreenstein, sample_scatter_cosine
