#include "ilab/scenario.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

#include "ilab/probe.hpp"

namespace ilab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

const json& field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing field '") + key + "'");
  return *it;
}

double number(const json& j, const char* what) {
  if (!j.is_number()) fail(std::string(what) + " must be a number");
  return j.get<double>();
}

std::string kind_of(const json& j, const char* what) {
  if (!j.is_object()) fail(std::string(what) + " must be an object with a 'kind'");
  return field(j, "kind").get<std::string>();
}

std::vector<double> number_list(const json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

Eigen::VectorXd vector_of(const json& j, int dim, const char* what) {
  const auto vals = number_list(j, what);
  if (static_cast<int>(vals.size()) != dim)
    fail(std::string(what) + " must have " + std::to_string(dim) + " entries");
  return Eigen::Map<const Eigen::VectorXd>(vals.data(), dim);
}

Eigen::MatrixXd matrix_of(const json& j, int dim, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    fail(std::string(what) + " must be a " + std::to_string(dim) + "x" +
         std::to_string(dim) + " row-major array");
  Eigen::MatrixXd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const auto row = number_list(j[r], what);
    if (static_cast<int>(row.size()) != dim)
      fail(std::string(what) + " row " + std::to_string(r) + " has wrong length");
    for (int c = 0; c < dim; ++c) m(r, c) = row[c];
  }
  return m;
}

ImpulseSchedule parse_schedule(const json& j, double horizon) {
  const auto kind = kind_of(j, "schedule");
  if (kind == "uniform")
    return ImpulseSchedule::uniform(number(field(j, "spacing"), "spacing"), horizon);
  if (kind == "explicit") {
    auto times = number_list(field(j, "times"), "schedule times");
    std::erase_if(times, [&](double t) { return t > horizon; });
    return ImpulseSchedule(std::move(times), horizon);
  }
  fail("schedule kind must be 'uniform' or 'explicit'");
}

CoefficientOperator parse_coefficients(const json& j, int dim) {
  const auto kind = kind_of(j, "A");
  if (kind == "constant")
    return CoefficientOperator::constant(matrix_of(field(j, "value"), dim, "A value"));
  auto matrices = [&](const char* key) {
    const json& arr = field(j, key);
    if (!arr.is_array()) fail("A values must be an array of matrices");
    std::vector<Eigen::MatrixXd> out;
    out.reserve(arr.size());
    for (const auto& m : arr) out.push_back(matrix_of(m, dim, "A value"));
    return out;
  };
  if (kind == "piecewise")
    return CoefficientOperator::piecewise_constant(
        number_list(field(j, "breaks"), "A breaks"), matrices("values"));
  if (kind == "sampled")
    return CoefficientOperator::sampled(number_list(field(j, "times"), "A times"),
                                        matrices("values"));
  fail("A kind must be 'constant', 'piecewise' or 'sampled'");
}

JumpSequence parse_jumps(const json& j, int dim, std::size_t count) {
  const auto kind = kind_of(j, "B");
  if (kind == "constant")
    return JumpSequence::constant(matrix_of(field(j, "value"), dim, "B value"), count);
  if (kind == "list") {
    const json& arr = field(j, "values");
    if (!arr.is_array() || arr.size() != count)
      fail("B values must list exactly one matrix per impulse (" +
           std::to_string(count) + " expected)");
    std::vector<Eigen::MatrixXd> ops;
    ops.reserve(count);
    for (const auto& m : arr) ops.push_back(matrix_of(m, dim, "B value"));
    return JumpSequence(std::move(ops));
  }
  fail("B kind must be 'constant' or 'list'");
}

ForcingFunction parse_forcing_function(const json* j, int dim) {
  if (!j) return ForcingFunction::zero(dim);
  const auto kind = kind_of(*j, "f");
  if (kind == "zero") return ForcingFunction::zero(dim);
  if (kind == "constant")
    return ForcingFunction::constant(vector_of(field(*j, "value"), dim, "f value"));
  auto vectors = [&](const char* key) {
    const json& arr = field(*j, key);
    if (!arr.is_array()) fail("f values must be an array of vectors");
    std::vector<Eigen::VectorXd> out;
    out.reserve(arr.size());
    for (const auto& v : arr) out.push_back(vector_of(v, dim, "f value"));
    return out;
  };
  if (kind == "piecewise")
    return ForcingFunction::piecewise_constant(
        number_list(field(*j, "breaks"), "f breaks"), vectors("values"));
  if (kind == "sampled")
    return ForcingFunction::sampled(number_list(field(*j, "times"), "f times"),
                                    vectors("values"));
  fail("f kind must be 'zero', 'constant', 'piecewise' or 'sampled'");
}

std::vector<Eigen::VectorXd> parse_offsets(const json* j, int dim, std::size_t count,
                                           const JumpSequence& jumps) {
  if (!j) return std::vector<Eigen::VectorXd>(count, Eigen::VectorXd::Zero(dim));
  const auto kind = kind_of(*j, "alphas");
  if (kind == "zero")
    return std::vector<Eigen::VectorXd>(count, Eigen::VectorXd::Zero(dim));
  if (kind == "constant")
    return std::vector<Eigen::VectorXd>(
        count, vector_of(field(*j, "value"), dim, "alphas value"));
  if (kind == "list") {
    const json& arr = field(*j, "values");
    if (!arr.is_array() || arr.size() != count)
      fail("alphas values must list exactly one vector per impulse (" +
           std::to_string(count) + " expected)");
    std::vector<Eigen::VectorXd> out;
    out.reserve(count);
    for (const auto& v : arr) out.push_back(vector_of(v, dim, "alphas value"));
    return out;
  }
  if (kind == "signs") {
    if (dim != 1) fail("alphas kind 'signs' needs a one-dimensional system");
    const auto signs = sign_sequence(jumps);
    std::vector<Eigen::VectorXd> out;
    out.reserve(signs.size());
    for (double s : signs) out.push_back(Eigen::VectorXd::Constant(1, s));
    return out;
  }
  fail("alphas kind must be 'zero', 'constant', 'list' or 'signs'");
}

}  // namespace

Scenario parse_scenario(const nlohmann::json& config,
                        std::optional<double> horizon_override) {
  try {
    if (!config.is_object()) fail("top level must be an object");
    const int dim = static_cast<int>(number(field(config, "dimension"), "dimension"));
    if (dim < 1) fail("dimension must be >= 1");
    const double horizon =
        horizon_override.value_or(number(field(config, "horizon"), "horizon"));

    auto schedule = parse_schedule(field(config, "schedule"), horizon);
    auto A = parse_coefficients(field(config, "A"), dim);
    auto jumps = parse_jumps(field(config, "B"), dim, schedule.size());

    const json* fj = config.contains("f") ? &config.at("f") : nullptr;
    const json* aj = config.contains("alphas") ? &config.at("alphas") : nullptr;
    auto f = parse_forcing_function(fj, dim);
    auto offsets = parse_offsets(aj, dim, schedule.size(), jumps);

    Eigen::VectorXd x0 = config.contains("x0")
                             ? vector_of(config.at("x0"), dim, "x0")
                             : Eigen::VectorXd::Zero(dim);

    return Scenario{ImpulsiveSystem(std::move(A), std::move(jumps), std::move(schedule)),
                    Forcing(std::move(f), std::move(offsets)), std::move(x0)};
  } catch (const nlohmann::json::exception& e) {
    fail(e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& file,
                       std::optional<double> horizon_override) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("config: cannot open " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config: " + file.string() + ": " + e.what());
  }
  return parse_scenario(j, horizon_override);
}

nlohmann::json certificate_to_json(const StabilityCertificate& certificate,
                                   nlohmann::json inputs) {
  return nlohmann::json{{"kind", to_string(certificate.kind)},
                        {"N", certificate.amplitude},
                        {"nu", certificate.rate},
                        {"provenance", to_string(certificate.source)},
                        {"inputs", std::move(inputs)}};
}

StabilityCertificate certificate_from_json(const nlohmann::json& j) {
  try {
    StabilityCertificate cert;
    const auto kind = field(j, "kind").get<std::string>();
    if (kind == "fundamental")
      cert.kind = CertificateKind::fundamental;
    else if (kind == "evolution")
      cert.kind = CertificateKind::evolution;
    else
      fail("certificate kind must be 'fundamental' or 'evolution'");
    cert.amplitude = number(field(j, "N"), "certificate N");
    cert.rate = number(field(j, "nu"), "certificate nu");
    if (!(cert.amplitude >= 1.0)) fail("certificate needs N >= 1");
    if (!(cert.rate > 0.0)) fail("certificate needs nu > 0");
    if (j.contains("provenance")) {
      const auto p = j.at("provenance").get<std::string>();
      bool known = false;
      for (auto s : {CertificateSource::boundedness_fundamental,
                     CertificateSource::boundedness_evolution,
                     CertificateSource::empirical_fit, CertificateSource::from_impulsive,
                     CertificateSource::from_continuous})
        if (p == to_string(s)) {
          cert.source = s;
          known = true;
        }
      if (!known) fail("unknown certificate provenance '" + p + "'");
    }
    return cert;
  } catch (const nlohmann::json::exception& e) {
    fail(e.what());
  }
}

}  // namespace ilab
