#pragma once

#include "modcom/anticommuting.hpp"
#include "modcom/builders.hpp"
#include "modcom/circuit.hpp"
#include "modcom/dense.hpp"
#include "modcom/errors.hpp"
#include "modcom/generators.hpp"
#include "modcom/honeycomb.hpp"
#include "modcom/json_io.hpp"
#include "modcom/modular.hpp"
#include "modcom/pauli_string.hpp"
#include "modcom/pauli_sum.hpp"
#include "modcom/pipeline.hpp"
#include "modcom/reduction.hpp"
#include "modcom/regions.hpp"
#include "modcom/sites.hpp"
