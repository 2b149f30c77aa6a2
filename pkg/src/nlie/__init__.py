"""Exact computations for n-Lie algebras: structure constants, cohomology, deformations, extensions, degenerations and Nambu-Poisson brackets."""
