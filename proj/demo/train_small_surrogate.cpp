// Trains a small baseline surrogate on a 27-point Gauss grid and compares it
// with the oracle on random parameter vectors.
#include <cstdio>

#include "surmodel/dataset/design.hpp"
#include "surmodel/surrogate/metrics.hpp"
#include "surmodel/surrogate/training.hpp"

int main() {
  using namespace surmodel;
  const oracle::FaultModel model{oracle::OracleConfig{}};
  const ParameterCube cube;
  const auto ds = dataset::split(dataset::generate(dataset::tensor_grid(cube, 3), model), model.n_steps(), 1);

  nn::TrainConfig cfg;
  cfg.max_epochs = 1500;
  cfg.patience = 200;
  cfg.seed = 2;
  const auto spec = nn::NetworkSpec::uniform(4, 4, 24, 2, nn::Activation::ReLU, nn::Activation::Softplus);
  const auto t = surrogate::train_baseline(ds, spec, cfg);
  std::printf("trained %zu epochs, best validation loss %.3g\n", t.run.val_loss.size(), t.run.best_val_loss);

  const auto mc = dataset::monte_carlo(cube, 50, 3);
  const auto acc = surrogate::accuracy(surrogate::trajectories(surrogate::OracleModel{&model}, mc, 10),
                                       surrogate::trajectories(t.model, mc, 10), 10);
  std::printf("R2(A_a) %.3f  R2(delta_S) %.3f\n", acc.r2[0], acc.r2[1]);
}
