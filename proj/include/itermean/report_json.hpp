#ifndef ITERMEAN_REPORT_JSON_HPP
#define ITERMEAN_REPORT_JSON_HPP

#include <json.hpp>

#include "itermean/dynamics.hpp"
#include "itermean/iterprod.hpp"
#include "itermean/verify.hpp"

namespace itermean {

/// Reports keep insertion order so serialized output is canonical.
using Json = nlohmann::ordered_json;

/// Rounds to 12 significant digits (the precision reports are written with),
/// so that parse + re-serialize of a report is byte-identical.
double round12(double v);

Json to_json(const MeanReport& r);
Json to_json(const ConvergenceReport& r);
Json to_json(const EqualityReport& r);
Json to_json(const CompositeEqReport& r);
Json to_json(const InvarianceReport& r);

/// CSV with header n,x,y,gap and one row per iteration.
std::string trace_csv(const IterationTrace& t);

/// Canonical dump: two-space indent, trailing newline.
std::string dump_report(const Json& j);

} // namespace itermean

#endif
