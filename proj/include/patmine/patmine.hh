#ifndef PATMINE_PATMINE_HH
#define PATMINE_PATMINE_HH

#include "aggregation.hh"
#include "apps.hh"
#include "bitmap.hh"
#include "data_graph.hh"
#include "errors.hh"
#include "matcher.hh"
#include "pattern.hh"
#include "pattern_gen.hh"
#include "plan.hh"

#endif
