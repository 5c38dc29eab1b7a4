#!/usr/bin/env python
# -*- coding:utf-8 -*-

from .baselines import FirstOrderConfig, train_adam, train_sgd
from .cg import CgConfig, CgResult, cg_solve, solve_newton_step
from .curvature import (
    HvpOperator,
    damped_hvp,
    gauss_newton_vector_product,
    jacobian_transpose_vector_product,
    jacobian_vector_product,
)
from .dataset import DatasetSplit, InteractionIndex, compact_ids, load_dataset, split
from .helpers import timeit
from .metrics import EvalResult, rmse
from .model import (
    Hyperparams,
    ParamVector,
    gradient,
    init_params,
    load_checkpoint,
    objective,
    predict,
    save_checkpoint,
)
from .reader import RatingTriple, Reader, parse_ratings
from .sam import DEFAULT_RHO_GRID, Perturbation, perturbed_point, sam_perturbation
from .trainer import EpochRecord, TrainReport, adapt_damping, step_control, train_sslf

__version__ = "0.1"
