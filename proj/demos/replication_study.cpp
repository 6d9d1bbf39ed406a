// Small Monte Carlo comparison of location/scale estimators under Tukey h data.
#include <iostream>

#include "heavytail/heavytail.hpp"

using namespace heavytail;

int main() {
  StudyPlan plan;
  plan.sample_sizes = {100};
  plan.delta_values = {0.0, 0.2, 1.0};
  plan.replications = 50;
  plan.estimators = {Estimator::kMedian, Estimator::kGaussianMle, Estimator::kIgmm};
  plan.seed = 7;
  write_csv(std::cout, run_study(plan, thread_count_from_env()));
}
