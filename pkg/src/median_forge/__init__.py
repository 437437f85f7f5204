"""median-forge: finite median algebras, spectral duality, free median
algebras, reduced words in free products, and deformations of the word
tree into median group operations."""

__version__ = "0.1.0"
