from excess_correlation.constants.columns import Columns
from excess_correlation.constants.tolerances import Tolerances
