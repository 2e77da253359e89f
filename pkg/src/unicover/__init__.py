"""Universal covers of finite simplicial sets and the homology of their total spaces."""

__version__ = "0.1.0"
