"""fpintegrate - Finite-part integration of Stieltjes transforms and hypergeometric identities."""

__version__ = "0.1.0"
__all__ = ["__version__"]
