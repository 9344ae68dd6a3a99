"""
Constants shared across the kernel, the report renderers and the command line.
"""

import logging

from sympy.polys.orderings import grevlex

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
DEFAULT_LOG_LEVEL = logging.WARNING

# Canonical forms and Groebner output depend on this order.
MONOMIAL_ORDER = grevlex

# Tangent coordinates of the shifted tangent bundle are named u_<coordinate>.
TANGENT_PREFIX = "u_"

STATUS_PASS = "PASS"
STATUS_FAIL = "FAIL"
STATUS_ERROR = "ERROR"
STATUS_INFO = "INFO"
STATUS_SKIP = "SKIP"

STAMP_FORMAT = "%Y-%m-%d %H:%M:%S"

ASSUMPTIONS = (
    "constant field taken to be QQ; ideals asserted prime, not verified"
)
