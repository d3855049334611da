from .common_utils import exists, default, parse_quantity, format_quantity, progress_bar
