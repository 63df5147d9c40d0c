#include "deconv/sampling.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

namespace deconv {

Sample sample_stable(double s, std::size_t n, RngStream& rng) {
  StableNoise noise{s};
  noise.validate();
  Sample out;
  out.y.resize(n);
  for (auto& v : out.y) v = noise.draw(rng);
  out.noise_name = "stable(" + std::to_string(s) + ")";
  out.signal_name = "none";
  return out;
}

Sample sample_convolution(const DensitySpec& f, const NoiseSpec& g,
                          std::size_t n, RngStream& rng) {
  Sample out;
  out.y.resize(n);
  for (auto& v : out.y) v = f.sampler(rng) + g.draw(rng);
  out.signal_name = f.name;
  out.noise_name = g.describe();
  return out;
}

void write_sample(const Sample& s, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ParamError("cannot open for writing: " + path);
  char buf[40];
  for (double v : s.y) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf << '\n';
  }
  os.close();

  nlohmann::json meta;
  meta["seed"] = s.seed;
  meta["n"] = s.y.size();
  meta["signal"] = s.signal_name;
  meta["noise"] = s.noise_name;
  std::ofstream ms(path + ".meta.json");
  if (!ms) throw ParamError("cannot open for writing: " + path + ".meta.json");
  ms << meta.dump(2) << '\n';
}

Sample read_sample(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParamError("cannot open sample file: " + path);
  Sample s;
  double v;
  while (is >> v) s.y.push_back(v);

  std::ifstream ms(path + ".meta.json");
  if (ms) {
    nlohmann::json meta;
    ms >> meta;
    s.seed = meta.value("seed", 0ULL);
    s.signal_name = meta.value("signal", "");
    s.noise_name = meta.value("noise", "");
  }
  return s;
}

}  // namespace deconv
