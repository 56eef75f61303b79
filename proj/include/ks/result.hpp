#pragma once

#include <string>
#include <vector>

namespace ks {

enum class Status { Exact, Certified, NoCertificate, Divergent };

const char* status_name(Status s);

struct TraceRecord {
    std::string gauge;
    double sum = 0;
};

struct IntegralResult {
    double value = 0;
    double error_bound = 0;
    Status status = Status::Exact;
    std::vector<TraceRecord> trace;
    std::string path;          // "exact", "series" or "adaptive"
    int continuity_check = -1; // -1 not applicable, 0 violated, 1 holds

    bool ok() const { return status == Status::Exact || status == Status::Certified; }
};

} // namespace ks
