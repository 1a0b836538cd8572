#pragma once

#include "qcl/scalar.hpp"
#include "qcl/laurent.hpp"
#include "qcl/signature.hpp"
#include "qcl/gtgraph.hpp"
#include "qcl/symfunc.hpp"
#include "qcl/weights.hpp"
#include "qcl/matrix.hpp"
#include "qcl/measures.hpp"
#include "qcl/opalg.hpp"
#include "qcl/genfunc.hpp"
#include "qcl/json_io.hpp"
