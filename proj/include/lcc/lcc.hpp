#pragma once

#include "lcc/prime.hpp"
#include "lcc/poly.hpp"
#include "lcc/tables.hpp"
#include "lcc/pminor.hpp"
#include "lcc/clonoid.hpp"
#include "lcc/witness.hpp"
#include "lcc/oracle.hpp"
#include "lcc/galois.hpp"
#include "lcc/embed.hpp"
#include "lcc/dot.hpp"
#include "lcc/io.hpp"
