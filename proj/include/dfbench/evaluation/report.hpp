#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dfbench/evaluation/anova.hpp"
#include "dfbench/evaluation/cross_validation.hpp"

namespace dfbench {

/// Fixed-point text with `decimals` places; "NA" for undefined values.
std::string format_fixed(std::optional<double> value, int decimals);

/// class,precision,recall,specificity,f_score,auc
/// The first four columns are percentages with one decimal; AUC is a
/// fraction with two decimals.
void write_metrics_csv(const EvaluationReport& report, std::ostream& out);

/// Rows are true classes, columns predicted classes.
void write_confusion_csv(const EvaluationReport& report, std::ostream& out);

/// fold,n_test,accuracy
void write_folds_csv(const EvaluationReport& report, std::ostream& out);

/// "key: value" summary followed by the per-class table.
std::string format_report_text(const EvaluationReport& report, bool include_timings = true);

/// test,term,df,sum_sq,mean_sq,statistic,p,p_bonferroni
void write_anova_csv(const AnovaResult& result, const std::string& factor_a_name, const std::string& factor_b_name,
                     const std::vector<std::string>& factor_b_levels, std::ostream& out);

}  // namespace dfbench
