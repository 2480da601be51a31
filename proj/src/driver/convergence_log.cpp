#include "sparta/driver/convergence_log.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sparta/common/error.hpp"

namespace sparta::driver {

namespace {

void write_number(std::ostream& out, double v)
{
    if (std::isinf(v))
        out << (v > 0 ? "inf" : "-inf");
    else
        out << v;
}

} // namespace

void write_convergence_log(std::ostream& out, const std::vector<BoundIterationRecord>& history)
{
    out << kConvergenceHeader << '\n';
    out.precision(12);
    for (const BoundIterationRecord& r : history) {
        out << r.iteration << ',' << r.k_requested << ',' << r.k_effective << ',';
        write_number(out, r.tac_lb);
        out << ',';
        write_number(out, r.tac_ub);
        out << ',';
        write_number(out, r.epsilon);
        out << ',' << r.wall_lb << ',' << r.wall_ub << '\n';
    }
}

std::string convergence_log(const std::vector<BoundIterationRecord>& history)
{
    std::ostringstream out;
    write_convergence_log(out, history);
    return out.str();
}

void write_convergence_log_file(const std::string& path, const std::vector<BoundIterationRecord>& history)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open " + path + " for writing");
    write_convergence_log(out, history);
}

} // namespace sparta::driver
