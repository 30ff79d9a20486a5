"""helikin: momentum-space gauge kinematics and screened spectral solvers.

Monopole harmonics, patched monopole gauge potentials, Hopf-bundle
sections, Berry-phase form factors, cocycle flux quantization, and the
spectral problems they screen (helicity oscillator, momentum-space
hydrogen).
"""

__version__ = "0.1.0"

from .basis import AngularGrid, MonopoleIndex, angular_inner_product, l2_residual, monopole_harmonic, wigner_d
from .errors import ConvergenceError, PatchDomainError
from .gauge import (
    PATCH_N,
    PATCH_S,
    Coupling,
    MomentumPoint,
    Patch,
    dirac_check,
    field_strength,
    gauge_potential,
    line_integral,
    tetrahedron_cocycle,
    transition_function,
    triangle_cocycle,
)
from .hopf import (
    SectionSpinor,
    SpinVector,
    chern_number,
    connection_components,
    helicity_residual,
    hopf_project,
    section,
    spin_field,
    spinor_from_angles,
)
from .screening import (
    FormFactor,
    FormFactorKind,
    PotentialSpec,
    berry_phase_form_factor,
    cross_patch_form_factor,
    equator_crossing,
    overlap_form_factor,
    partial_wave_matrix_element,
    screened_kernel,
    transition_phase,
)
from .spectra import (
    Channel,
    RadialGrid,
    SpectrumResult,
    degeneracy_count,
    oscillator_energy,
    oscillator_wavefunction,
    solve_hydrogen,
    solve_radial_oscillator,
    splitting_report,
)
from .specfun import QuadratureRule, gauss_legendre, jacobi_poly, laguerre_poly

__all__ = [
    "__version__",
    "AngularGrid", "MonopoleIndex", "angular_inner_product", "l2_residual",
    "monopole_harmonic", "wigner_d",
    "ConvergenceError", "PatchDomainError",
    "PATCH_N", "PATCH_S", "Coupling", "MomentumPoint", "Patch",
    "dirac_check", "field_strength", "gauge_potential", "line_integral",
    "tetrahedron_cocycle", "transition_function", "triangle_cocycle",
    "SectionSpinor", "SpinVector", "chern_number", "connection_components",
    "helicity_residual", "hopf_project", "section", "spin_field",
    "spinor_from_angles",
    "FormFactor", "FormFactorKind", "PotentialSpec",
    "berry_phase_form_factor", "cross_patch_form_factor", "equator_crossing",
    "overlap_form_factor", "partial_wave_matrix_element", "screened_kernel",
    "transition_phase",
    "Channel", "RadialGrid", "SpectrumResult", "degeneracy_count",
    "oscillator_energy", "oscillator_wavefunction", "solve_hydrogen",
    "solve_radial_oscillator", "splitting_report",
    "QuadratureRule", "gauss_legendre", "jacobi_poly", "laguerre_poly",
]
