"""Adaptive mesh point selection for scalar autonomous IVPs z' = 1/g(z)."""
from .baseline import BaselineConfig, equidistant_solve, frozen_step, implicit_step
from .bench import ExperimentRow, emit, measure_errors, run_table
from .core import (AdmeshConfig, SolveReport, StepRecord, admesh_solve, bisec,
                   bisection_depth, c_hat, next_mesh_point, theorem_bound)
from .exceptions import *  # noqa: F401,F403
from .nc_constants import NcConstant, newton_cotes_constant
from .optimal_mesh import OptimalMesh, c_bar, equidistribute, gain_report, m_of_eps
from .poly_interp import (InterpPolynomial, antiderivative_between, build_interpolant,
                          divided_difference)
from .problems import Problem, local_solution, reference_solution, registry

__version__ = "0.1.0"
