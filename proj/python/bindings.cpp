#include <pybind11/pybind11.h>
PYBIND11_MODULE(_pxfb, m) { m.doc() = "wip"; }
