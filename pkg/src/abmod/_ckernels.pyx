# cython: language_level=3
# Compiled build of the pure-Python kernels; the source is shared verbatim.
include "_kernels_py.py"
