#pragma once

#include <string>
#include <vector>

#include "topkbench/engine.hpp"

namespace topkbench {

// One pass over the data, with the entities (tables/dimensions) it touches.
struct Traversal {
    std::string name;
    std::vector<std::string> entities;
};

struct PlanComplexity {
    unsigned published = 0;             // tabulated traversal count
    std::vector<Traversal> breakdown;   // this artifact's own accounting
    unsigned breakdown_total() const;   // sum of entities over all traversals
};

// `published` is a static mapping of the tabulated per-query traversal
// counts. `breakdown` lists the main plan plus the nested statistics scans
// (subset count, per-term document count, and the average-length scan that
// Okapi adds); its totals use a different counting rule than the published
// table but preserve the same orderings (Okapi >= TFIDF, Q4 >= Q1). See
// docs/plan-accounting.md.
PlanComplexity plan_complexity(Layout layout, Scheme scheme, QueryId query_id,
                               QueryMode mode);

// JSON description of the plan (operators, constraints, traversals).
std::string plan_json(Layout layout, const QuerySpec& spec);

// Portable SQL rendering of the query for the given layout. Documentation
// aid only; nothing in this artifact executes it.
std::string plan_sql(Layout layout, const QuerySpec& spec);

}  // namespace topkbench
