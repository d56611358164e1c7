"""Supply-chain network formation under yield uncertainty."""

import json

from ._core import *  # noqa: F401,F403
from ._core import Error, run_cli


def cli(*args):
    """Run a CLI command and return (exit_code, parsed JSON document)."""
    code, out = run_cli([str(a) for a in args])
    return code, json.loads(out)
