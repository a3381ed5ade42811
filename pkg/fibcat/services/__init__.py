"""Engine services: one module per area of the theory."""
