"""Recipe templates and synthetic trace generation."""
