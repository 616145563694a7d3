#include <initializer_list>
#include <optional>
#include <set>
#include <string>

#include "detail/density_impl.hpp"
#include "fisherp/errors.hpp"

namespace fisherp {

namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

class Params {
 public:
  Params(const json& descriptor, std::string path) : path_(join(path, "params")) {
    if (!descriptor.contains("params")) {
      params_ = json::object();
    } else {
      params_ = descriptor.at("params");
      if (!params_.is_object()) throw DescriptorError(path_, "params must be an object");
    }
  }

  // First present key among the aliases; the first alias names the field.
  const json* find(std::initializer_list<const char*> aliases) {
    const json* hit = nullptr;
    for (const char* key : aliases) {
      seen_.insert(key);
      if (!hit && params_.contains(key)) hit = &params_.at(key);
    }
    return hit;
  }

  double number(std::initializer_list<const char*> aliases, std::optional<double> fallback = {}) {
    const json* v = find(aliases);
    const std::string field = join(path_, *aliases.begin());
    if (!v) {
      if (fallback) return *fallback;
      throw DescriptorError(field, "missing required parameter");
    }
    if (!v->is_number()) throw DescriptorError(field, "expected a number");
    return v->get<double>();
  }

  const json& node(std::initializer_list<const char*> aliases) {
    const json* v = find(aliases);
    if (!v) throw DescriptorError(field(aliases), "missing required parameter");
    return *v;
  }

  std::string field(std::initializer_list<const char*> aliases) const {
    return join(path_, *aliases.begin());
  }
  const std::string& path() const { return path_; }

  void reject_unknown() const {
    for (const auto& item : params_.items()) {
      if (!seen_.count(item.key())) {
        throw DescriptorError(join(path_, item.key()), "unknown parameter");
      }
    }
  }

 private:
  json params_;
  std::string path_;
  std::set<std::string> seen_;
};

DensityModel parse(const json& d, const std::string& path);

template <class Make>
DensityModel build(const Params& params, Make make) {
  params.reject_unknown();
  try {
    return make();
  } catch (const DescriptorError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw DescriptorError(params.path(), e.what());
  }
}

DensityModel parse(const json& d, const std::string& path) {
  if (!d.is_object()) throw DescriptorError(path.empty() ? "$" : path, "descriptor must be an object");
  for (const auto& item : d.items()) {
    if (item.key() != "family" && item.key() != "params") {
      throw DescriptorError(join(path, item.key()), "unknown key");
    }
  }
  if (!d.contains("family") || !d.at("family").is_string()) {
    throw DescriptorError(join(path, "family"), "missing or non-string family");
  }
  const auto family = d.at("family").get<std::string>();
  Params p(d, path);

  if (family == "normal") {
    const double mean = p.number({"mean", "a"}, 0.0);
    const double sigma = p.number({"sigma", "stddev"}, 1.0);
    return build(p, [&] { return DensityModel::normal(mean, sigma); });
  }
  if (family == "gamma") {
    const double n = p.number({"n", "shape"});
    return build(p, [&] { return DensityModel::gamma(n); });
  }
  if (family == "beta") {
    const double a = p.number({"alpha", "a"});
    const double b = p.number({"beta", "b"});
    return build(p, [&] { return DensityModel::beta(a, b); });
  }
  if (family == "hermite_weighted") {
    return build(p, [] { return DensityModel::hermite_weighted(); });
  }
  if (family == "polynomial_tail") {
    const double q = p.number({"q"});
    return build(p, [&] { return DensityModel::polynomial_tail(q); });
  }
  if (family == "half_gaussian") {
    return build(p, [] { return DensityModel::half_gaussian(); });
  }
  if (family == "logistic") {
    return build(p, [] { return DensityModel::logistic(); });
  }
  if (family == "mixture") {
    const json& list = p.node({"components"});
    const std::string list_path = p.field({"components"});
    if (!list.is_array() || list.empty()) {
      throw DescriptorError(list_path, "expected a nonempty array");
    }
    std::vector<MixtureComponent> components;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string item_path = list_path + "[" + std::to_string(i) + "]";
      const json& item = list[i];
      if (!item.is_object() || !item.contains("weight") || !item.contains("density")) {
        throw DescriptorError(item_path, "expected {\"weight\": w, \"density\": {...}}");
      }
      for (const auto& kv : item.items()) {
        if (kv.key() != "weight" && kv.key() != "density") {
          throw DescriptorError(join(item_path, kv.key()), "unknown key");
        }
      }
      if (!item.at("weight").is_number()) {
        throw DescriptorError(join(item_path, "weight"), "expected a number");
      }
      components.push_back(
          {item.at("weight").get<double>(), parse(item.at("density"), join(item_path, "density"))});
    }
    return build(p, [&] { return DensityModel::mixture(components); });
  }
  if (family == "gaussian_convolution") {
    DensityModel base = parse(p.node({"base"}), p.field({"base"}));
    const double eps = p.number({"eps", "epsilon"});
    return build(p, [&] { return DensityModel::gaussian_convolution(base, eps); });
  }
  if (family == "affine") {
    DensityModel base = parse(p.node({"base"}), p.field({"base"}));
    const double shift = p.number({"shift"}, 0.0);
    const double scale = p.number({"scale"}, 1.0);
    return build(p, [&] { return DensityModel::affine(base, shift, scale); });
  }
  throw DescriptorError(join(path, "family"), "unknown family '" + family + "'");
}

}  // namespace

DensityModel DensityModel::from_json(const nlohmann::json& descriptor) {
  return parse(descriptor, "");
}

}  // namespace fisherp
