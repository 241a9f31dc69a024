"""tacit: a tactic-learning proof engine.

Records every executed tactic with its surrounding proof states, learns
online from those records, suggests next tactics, searches for complete
proofs (independently checked by the kernel), caches found proofs as
modification-resilient reconstruction tactics, and persists learned
databases inside compiled units that dependent files inherit.
"""

__version__ = "0.1.0"
