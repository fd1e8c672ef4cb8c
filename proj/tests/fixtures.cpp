#include "fixtures.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace fixtures {

using symlift::Feature;
using symlift::Model;

std::string data_path(const std::string& name) { return std::string(SYMLIFT_DATA_DIR) + "/" + name; }

Model ex1() { return symlift::load_model(data_path("ex1.fgm")); }
Model triangle() { return symlift::load_model(data_path("triangle.fgm")); }
Model frucht() { return symlift::load_model(data_path("frucht.fgm")); }
Model complete3() { return symlift::load_model(data_path("complete3.fgm")); }
Model unary() { return symlift::load_model(data_path("unary.fgm")); }

symlift::mln::Mln lovers_smokers() { return symlift::mln::load_mln(data_path("lovers_smokers.mln")); }
symlift::mln::Mln q2() { return symlift::mln::load_mln(data_path("q2.mln")); }
symlift::mln::Mln friends_smokers() {
  return symlift::mln::load_mln(data_path("friends_smokers.mln"));
}

Model random_symmetric_pairwise(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::vector<int> sigma(n);
  for (int i = 0; i < n; ++i) sigma[i] = i;
  std::shuffle(sigma.begin(), sigma.end(), rng);
  std::uniform_int_distribution<int> entry(0, 2), weight(-2, 2), coin(0, 2);

  std::vector<Feature> features;
  std::vector<int> ties;
  std::vector<double> theta;
  auto new_class = [&]() {
    int w = 0;
    while (w == 0) w = weight(rng);
    theta.push_back(w);
    return static_cast<int>(theta.size()) - 1;
  };

  std::map<std::pair<int, int>, bool> used;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (used.count({u, v}) || coin(rng) != 0) continue;
      std::vector<double> t(4);
      do {
        for (double& x : t) x = entry(rng);
      } while (!Feature{{0, 1}, t}.depends_on_position(0) ||
               !Feature{{0, 1}, t}.depends_on_position(1));
      // Oriented orbit of (u, v) under <sigma>.
      std::vector<std::pair<int, int>> orbit;
      int a = u, b = v;
      do {
        orbit.emplace_back(a, b);
        a = sigma[a];
        b = sigma[b];
      } while (!(a == u && b == v));
      bool flips = false;
      for (auto [x, y] : orbit)
        if (std::find(orbit.begin(), orbit.end(), std::make_pair(y, x)) != orbit.end())
          flips = true;
      if (flips) {
        const double off = t[1] + t[2];
        t[1] = t[2] = off;
        if (!Feature{{0, 1}, t}.depends_on_position(0)) t[3] += 1;
      }
      const int cls = new_class();
      for (auto [x, y] : orbit) {
        const auto key = std::make_pair(std::min(x, y), std::max(x, y));
        if (used.count(key)) continue;
        used[key] = true;
        Feature f;
        f.scope = {key.first, key.second};
        f.table = x < y ? t : std::vector<double>{t[0], t[2], t[1], t[3]};
        features.push_back(f);
        ties.push_back(cls);
      }
    }
  }
  std::vector<bool> seen(n, false);
  for (int v = 0; v < n; ++v) {
    if (seen[v]) continue;
    const int cls = new_class();
    for (int w = v; !seen[w]; w = sigma[w]) {
      seen[w] = true;
      features.push_back({{w}, {0.0, 1.0}});
      ties.push_back(cls);
    }
  }
  return Model::create(n, std::move(features), std::move(ties), std::move(theta));
}

Model random_model(int k) {
  const int n = 4 + k % 5;
  return random_symmetric_pairwise(1000 + static_cast<std::uint64_t>(k), n);
}

}  // namespace fixtures
