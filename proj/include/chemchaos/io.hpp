#ifndef CHEMCHAOS_IO_HPP
#define CHEMCHAOS_IO_HPP

#include <string>
#include <vector>

#include "chemchaos/polysys.hpp"
#include "chemchaos/qcm.hpp"

namespace chemchaos {

/// System definition document: {"dim": N, "vars": [...], "eqs": [[{"coeff":
/// "p/q"|decimal, "exps": [..]}, ...], ...]}. Serialize-then-parse is exact.
std::string system_to_json(const PolySystem& s);
PolySystem system_from_json(const std::string& text);

/// Plan document: base system inline or by catalog id, per-equation piece
/// membership by exponent vector, kinds, epsilon/mu/a, optional post_scale.
std::string plan_to_json(const QcmPlan& plan, const std::string& base_id = "");
QcmPlan plan_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// CSV with header "t,x1,...,xN", 17 significant digits.
std::string series_csv(const std::vector<double>& times,
                       const std::vector<Eigen::VectorXd>& rows, const std::string& value_prefix);

std::string format_double(double v);

}  // namespace chemchaos

#endif
