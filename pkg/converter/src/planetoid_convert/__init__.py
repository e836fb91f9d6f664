"""Planetoid citation datasets (Cora, CiteSeer, Pubmed) to bundle dirs."""

from .convert import DATASETS, ConversionError, convert, load_raw

__all__ = ["DATASETS", "ConversionError", "convert", "load_raw"]
