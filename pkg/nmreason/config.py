"""
Runtime configuration read from the environment (and an optional .env file).

Every enumeration in the toolkit is exhaustive, so each one is guarded by a cap.
Exceeding a cap raises CapExceededError; nothing is ever truncated silently.
"""
import os
from typing import Optional

from dotenv import load_dotenv

load_dotenv()

# ============================================================================
# ENUMERATION CAPS
# ============================================================================
ENUMERATION_CAP = int(os.getenv("NMR_ENUMERATION_CAP", "20"))   # propositions per model space
ARITY_CAP = int(os.getenv("NMR_ARITY_CAP", "8"))                 # truth tables up to 256 rows
RULE_CAP = int(os.getenv("NMR_RULE_CAP", "16"))                  # default-rule subsets 2^|D|
SIGN_CAP = int(os.getenv("NMR_SIGN_CAP", "20"))                  # full-set sign maps 2^|SF_L|
HYPOTHESIS_CAP = int(os.getenv("NMR_HYPOTHESIS_CAP", "12"))      # candidate explanations 3^|A|

# ============================================================================
# EXECUTION
# ============================================================================
WORKERS = max(1, int(os.getenv("NMR_WORKERS", "1")))
LOG_LEVEL = os.getenv("NMR_LOG_LEVEL", "WARNING").upper()


def resolve(cap: Optional[int], default: int) -> int:
    """Explicit override wins; None falls back to the configured value."""
    return default if cap is None else cap
