# Utils package

from .bit_utils import BitUtils

__all__ = ['BitUtils']
