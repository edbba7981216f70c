#pragma once
// Everything in one include.

#include "mdtgn/conservation.hpp"
#include "mdtgn/dirac.hpp"
#include "mdtgn/error.hpp"
#include "mdtgn/estimates.hpp"
#include "mdtgn/gauge.hpp"
#include "mdtgn/io.hpp"
#include "mdtgn/lattice.hpp"
#include "mdtgn/maxwell.hpp"
#include "mdtgn/norms.hpp"
#include "mdtgn/report.hpp"
#include "mdtgn/studies.hpp"
