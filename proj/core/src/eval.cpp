#include "etuk/eval.hpp"

#include <json.hpp>
#include <sstream>

#include "etuk/errors.hpp"
#include "etuk/matrix_io.hpp"

namespace etuk {
namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

EvalReport evaluate(const Predictions& preds, const SparseRowMatrix& labels, std::size_t k,
                    std::optional<std::span<const double>> ps_weights) {
    const std::size_t n = labels.rows();
    const std::size_t m = labels.cols();
    if (preds.size() != n)
        throw DimensionError("predictions have " + std::to_string(preds.size()) + " rows, labels " +
                             std::to_string(n));
    if (!labels.satisfies(MatrixKind::binary)) throw ValidationError("label matrix must be binary");
    validate_predictions(preds, n, m, k);
    if (ps_weights && ps_weights->size() != m)
        throw DimensionError("propensity weights have " + std::to_string(ps_weights->size()) + " entries, expected " +
                             std::to_string(m));

    std::vector<std::size_t> tp(m, 0), predicted(m, 0), positives(m, 0);
    double ip = 0.0, ir = 0.0, psp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const RowView y = labels.row(i);
        std::size_t hits = 0;
        for_each_predicted(y, preds[i].labels(), [&](label_t j, double v) {
            ++predicted[j];
            if (v != 0.0) {
                ++tp[j];
                ++hits;
                if (ps_weights) psp += (*ps_weights)[j];
            }
        });
        for (std::size_t e = 0; e < y.size(); ++e) ++positives[y.indices[e]];
        ip += static_cast<double>(hits) / static_cast<double>(k);
        ir += ratio(static_cast<double>(hits), static_cast<double>(y.size()));
    }

    EvalReport r;
    r.k = k;
    const double dn = static_cast<double>(n);
    r.instance_precision = ratio(ip, dn);
    r.instance_recall = ratio(ir, dn);
    double mp = 0.0, mr = 0.0, mf = 0.0;
    std::size_t covered = 0;
    for (std::size_t j = 0; j < m; ++j) {
        const auto t = static_cast<double>(tp[j]);
        mp += ratio(t, static_cast<double>(predicted[j]));
        mr += ratio(t, static_cast<double>(positives[j]));
        mf += ratio(2.0 * t, static_cast<double>(positives[j] + predicted[j]));
        if (tp[j] > 0) ++covered;
    }
    const double dm = static_cast<double>(m);
    r.macro_precision = ratio(mp, dm);
    r.macro_recall = ratio(mr, dm);
    r.macro_f1 = ratio(mf, dm);
    r.coverage = ratio(static_cast<double>(covered), dm);
    if (ps_weights) r.ps_precision = ratio(psp, dn);
    return r;
}

std::vector<std::pair<std::string, double>> EvalReport::entries() const {
    const std::string at = "@" + std::to_string(k);
    std::vector<std::pair<std::string, double>> out{
        {"iP" + at, instance_precision}, {"iR" + at, instance_recall}, {"mP" + at, macro_precision},
        {"mR" + at, macro_recall},       {"mF" + at, macro_f1},        {"mC" + at, coverage},
    };
    if (ps_precision) out.emplace_back("psP" + at, *ps_precision);
    return out;
}

std::string EvalReport::to_text() const {
    std::ostringstream out;
    for (const auto& [key, value] : entries()) out << key << '=' << format_real(value) << '\n';
    return out.str();
}

std::string EvalReport::to_json() const {
    nlohmann::ordered_json j;
    j["k"] = k;
    for (const auto& [key, value] : entries()) j[key] = value;
    return j.dump(2) + "\n";
}

}  // namespace etuk
