#include "dfbench/evaluation/report.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace dfbench {

namespace {

std::string format_real(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
}

std::optional<double> percent(std::optional<double> v) {
    if (!v) return std::nullopt;
    return *v * 100.0;
}

}  // namespace

std::string format_fixed(std::optional<double> value, int decimals) {
    if (!value) return "NA";
    std::ostringstream s;
    s << std::fixed << std::setprecision(decimals) << *value;
    return s.str();
}

void write_metrics_csv(const EvaluationReport& report, std::ostream& out) {
    out << "class,precision,recall,specificity,f_score,auc\n";
    for (std::size_t k = 0; k < report.per_class.size(); ++k) {
        const auto& m = report.per_class[k];
        out << report.class_names[k] << ',' << format_fixed(percent(m.precision), 1) << ','
            << format_fixed(percent(m.recall), 1) << ',' << format_fixed(percent(m.specificity), 1) << ','
            << format_fixed(percent(m.f_score), 1) << ',' << format_fixed(m.auc, 2) << '\n';
    }
}

void write_confusion_csv(const EvaluationReport& report, std::ostream& out) {
    out << "true\\predicted";
    for (const auto& name : report.class_names) out << ',' << name;
    out << '\n';
    for (int i = 0; i < report.confusion.n_classes(); ++i) {
        out << report.class_names[static_cast<std::size_t>(i)];
        for (int j = 0; j < report.confusion.n_classes(); ++j) out << ',' << report.confusion.at(i, j);
        out << '\n';
    }
}

void write_folds_csv(const EvaluationReport& report, std::ostream& out) {
    out << "fold,n_test,accuracy\n";
    for (std::size_t f = 0; f < report.fold_accuracies.size(); ++f) {
        out << f + 1 << ',' << report.fold_sizes.at(f) << ','
            << format_fixed(report.fold_accuracies[f], 6) << '\n';
    }
}

std::string format_report_text(const EvaluationReport& report, bool include_timings) {
    std::ostringstream out;
    out << "classes: " << report.class_names.size() << '\n';
    out << "samples: " << report.confusion.total() << '\n';
    out << "folds: " << report.fold_accuracies.size() << '\n';
    out << "accuracy: " << format_fixed(report.accuracy * 100.0, 1) << "%\n";
    out << "ci95_halfwidth: " << format_fixed(report.ci_halfwidth * 100.0, 1) << "%\n";
    out << "fold_accuracies:";
    for (const double a : report.fold_accuracies) out << ' ' << format_fixed(a, 4);
    out << '\n';
    if (include_timings) {
        out << "train_seconds: " << format_fixed(report.train_seconds, 3) << '\n';
        out << "predict_seconds: " << format_fixed(report.predict_seconds, 3) << '\n';
    }
    out << "per_class:\n";
    out << "  " << std::left << std::setw(22) << "class" << std::right << std::setw(10) << "precision"
        << std::setw(8) << "recall" << std::setw(13) << "specificity" << std::setw(9) << "f_score" << std::setw(6)
        << "auc" << '\n';
    for (std::size_t k = 0; k < report.per_class.size(); ++k) {
        const auto& m = report.per_class[k];
        out << "  " << std::left << std::setw(22) << report.class_names[k] << std::right << std::setw(10)
            << format_fixed(percent(m.precision), 1) << std::setw(8) << format_fixed(percent(m.recall), 1)
            << std::setw(13) << format_fixed(percent(m.specificity), 1) << std::setw(9)
            << format_fixed(percent(m.f_score), 1) << std::setw(6) << format_fixed(m.auc, 2) << '\n';
    }
    return out.str();
}

void write_anova_csv(const AnovaResult& result, const std::string& factor_a_name, const std::string& factor_b_name,
                     const std::vector<std::string>& factor_b_levels, std::ostream& out) {
    out << "test,term,df,sum_sq,mean_sq,statistic,p,p_bonferroni\n";
    auto term_row = [&](const std::string& name, const AnovaTerm& t, bool has_f) {
        out << "anova," << name << ',' << format_real(t.df) << ',' << format_real(t.sum_sq) << ','
            << format_real(t.mean_sq) << ',';
        if (has_f) out << format_real(t.f) << ',' << format_real(t.p);
        else out << ',';
        out << ",\n";
    };
    term_row(factor_a_name, result.factor_a, true);
    term_row(factor_b_name, result.factor_b, true);
    term_row("residual", result.residual, false);
    for (const auto& t : result.factor_b_pairs) {
        out << "paired_t," << factor_b_levels.at(t.level_a) << " vs " << factor_b_levels.at(t.level_b) << ','
            << format_real(t.df) << ",,," << format_real(t.t) << ',' << format_real(t.p_raw) << ','
            << format_real(t.p_adjusted) << '\n';
    }
}

}  // namespace dfbench
