"""Classical, quantum-inspired and Grover-based genetic algorithms, simulated on a desk."""

__version__ = "0.1.0"
