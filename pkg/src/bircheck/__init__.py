"""bircheck: lift RV64 disassembly to a typed IR, execute it symbolically,
and check Hoare-style binary contracts with an external SMT solver."""

__version__ = "0.1.0"
