#pragma once

#include "incmeter/core/csv.hpp"
#include "incmeter/core/database.hpp"
#include "incmeter/core/error.hpp"
#include "incmeter/core/measure_value.hpp"
#include "incmeter/core/schema.hpp"
#include "incmeter/core/value.hpp"
#include "incmeter/dsl/ast.hpp"
#include "incmeter/dsl/parser.hpp"
#include "incmeter/dsl/printer.hpp"
#include "incmeter/grounder/grounder.hpp"
#include "incmeter/io/manifest.hpp"
#include "incmeter/kb/kb.hpp"
#include "incmeter/lp/psat.hpp"
#include "incmeter/lp/simplex.hpp"
#include "incmeter/measures/measure_id.hpp"
#include "incmeter/measures/measures.hpp"
#include "incmeter/transversal/transversal.hpp"
