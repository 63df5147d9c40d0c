#include "deconv/noise.hpp"

#include <cmath>
#include <sstream>

namespace deconv {

double StableNoise::draw(RngStream& r) const {
  double v = kPi * (r.uniform01() - 0.5);  // Uniform(-pi/2, pi/2)
  if (s == 1.0) return std::tan(v);
  double w = r.exponential();
  double cv = std::cos(v);
  return std::sin(s * v) / std::pow(cv, 1.0 / s) *
         std::pow(std::cos((1.0 - s) * v) / w, (1.0 - s) / s);
}

const PolynomialNoise& NoiseSpec::poly() const {
  if (!is_polynomial()) throw ParamError("noise is not polynomial");
  return std::get<PolynomialNoise>(v_);
}

const StableNoise& NoiseSpec::stable() const {
  if (!is_stable()) throw ParamError("noise is not stable");
  return std::get<StableNoise>(v_);
}

double NoiseSpec::cf_real(double u) const {
  return std::visit([u](const auto& n) { return n.cf_real(u); }, v_);
}

CfFn NoiseSpec::cf() const {
  NoiseSpec copy = *this;
  return [copy](double u) { return cx(copy.cf_real(u), 0.0); };
}

double NoiseSpec::draw(RngStream& r) const {
  return std::visit([&r](const auto& n) { return n.draw(r); }, v_);
}

std::string NoiseSpec::describe() const {
  std::ostringstream os;
  if (is_polynomial())
    os << "poly(" << poly().sigma << "," << poly().gamma << ")";
  else
    os << "stable(" << stable().s << ")";
  return os.str();
}

NoiseSpec NoiseSpec::parse(const std::string& spec) {
  auto lp = spec.find('(');
  auto rp = spec.rfind(')');
  if (lp == std::string::npos || rp == std::string::npos || rp < lp)
    throw ParamError("bad noise spec: " + spec);
  std::string name = spec.substr(0, lp);
  std::string inner = spec.substr(lp + 1, rp - lp - 1);
  std::stringstream ss(inner);
  std::string tok;
  std::vector<double> args;
  while (std::getline(ss, tok, ',')) {
    try {
      args.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ParamError("bad numeric argument '" + tok + "' in " + spec);
    }
  }
  if (name == "poly" || name == "polynomial") {
    if (args.size() == 1) return NoiseSpec(PolynomialNoise{args[0], 1.0});
    if (args.size() == 2) return NoiseSpec(PolynomialNoise{args[0], args[1]});
    throw ParamError("poly noise expects (sigma) or (sigma,gamma)");
  }
  if (name == "stable") {
    if (args.size() != 1) throw ParamError("stable noise expects (s)");
    return NoiseSpec(StableNoise{args[0]});
  }
  throw ParamError("unknown noise: " + spec);
}

}  // namespace deconv
