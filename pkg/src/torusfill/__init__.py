"""Contact-surgery calculus on torus bundles."""
