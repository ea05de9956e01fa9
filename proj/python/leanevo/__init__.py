"""Lean 4 statement evolution toolkit: AST rewriting, prompts, and hashing.

The compiled core lives in ``leanevo._core``. When running from a build
tree the module may sit next to this package instead of inside it.
"""

try:
    from ._core import *  # noqa: F401,F403
    from ._core import __version__  # noqa: F401
except ImportError:  # build-tree layout
    from _core import *  # type: ignore  # noqa: F401,F403
    from _core import __version__  # type: ignore # noqa: F401
