from excess_correlation.__about__ import (
    __author__,
    __copyright__,
    __summary__,
    __title__,
    __uri__,
)
