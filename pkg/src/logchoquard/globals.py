"""This modules contains global variables for the logchoquard package"""

import os
from warnings import warn

import torch

# float dtype is float64 by default, and can be switch to float32 using the
# LOGCHOQUARD_FLOAT_DTYPE environment variable (before importing logchoquard).
# Constants and audits are only meaningful in double precision.
admissible_float_dtypes = ["float32", "float64"]
float_dtype = os.environ.get("LOGCHOQUARD_FLOAT_DTYPE", "float64")

if float_dtype in admissible_float_dtypes:
    float_dtype = getattr(torch, float_dtype)

else:
    warn(
        f"Unknown float dtype {float_dtype}. Possible values are"
        + f" {admissible_float_dtypes}. Using float64 as default.",
        stacklevel=1,
    )
    float_dtype = torch.float64

# int dtype is int64
int_dtype = torch.int64

# Size of the worker pool used by torch for intra-op parallelism
default_num_workers = os.cpu_count() or 1
num_workers = os.environ.get(
    "LOGCHOQUARD_NUM_WORKERS", str(default_num_workers)
)

try:
    num_workers = int(num_workers)
    if num_workers < 1:
        raise ValueError
except ValueError:
    warn(
        f"Invalid number of workers {num_workers}, it must be a positive"
        + f" integer. Using {default_num_workers} as default.",
        stacklevel=1,
    )
    num_workers = default_num_workers

torch.set_num_threads(num_workers)

# Runtime type checking of the public functions, disabled with
# LOGCHOQUARD_TYPECHECK=0 (before importing logchoquard).
typecheck_enabled = os.environ.get("LOGCHOQUARD_TYPECHECK", "1") not in (
    "0",
    "false",
    "no",
)
