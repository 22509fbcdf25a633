"""Error-detecting MixColumn toolkit.

Thin re-export of the compiled extension: finite-field arithmetic,
the diffusion-matrix catalog and criteria, signature schemes, XOR-gate
cost reports, and fault-injection campaigns.
"""

try:
    from ._mced import *  # noqa: F401,F403
    from ._mced import __version__  # noqa: F401
except ImportError:  # running against a build tree via PYTHONPATH
    from _mced import *  # noqa: F401,F403
    from _mced import __version__  # noqa: F401
