"""Cadzow and Fast Cadzow denoising and completion of low-rank Hankel signals."""
from .errors import (CadzowError, ConfigError, DegenerateSignal, InvalidArgument, InvalidPlan,
                     NumericalError, ParseError, RankError, ShapeError, UnsupportedCombination)
from .hankel import (HankelOperator, HankelPlan, dehankelize, dehankelize_lowrank,
                     hankel_adjoint_matvec, hankel_matvec, hankelize_dense, make_plan)
from .lowrank import (FactorTriple, TangentComponents, projected_truncated_svd,
                      randomized_lowrank, tangent_components, tangent_project_dense, truncated_svd)
from .metrics import (ExperimentConfig, TrialTable, componentwise_mse, mse, positive_test,
                      run_trials)
from .signals import (SampleMask, add_noise, gen_dirac_fourier, gen_linear_events, gen_spectral,
                      sample_mask)
from .solvers import (SolverOptions, SolverRun, cadzow_step, fast_cadzow_step, fast_gradient_step,
                      gradient_step, run, run_fx)

__version__ = "0.1.0"
