#include "rpls/serialization.hpp"

#include "rpls/errors.hpp"
#include "rpls/io.hpp"

#include <fmt/format.h>

namespace rpls {

using nlohmann::json;

namespace {

json vector_to_json(const Vector &v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector vector_from_json(const json &j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(),
                                  static_cast<Eigen::Index>(values.size()));
}

template <typename F> auto parsing(std::string_view what, F &&body) {
  try {
    return body();
  } catch (const json::exception &e) {
    throw ParseError(fmt::format("{}: {}", what, e.what()));
  }
}

ColumnTransform transform_from_json(const json &center, const json &scale) {
  ColumnTransform t{vector_from_json(center), vector_from_json(scale)};
  if (t.center.size() != t.scale.size())
    throw ParseError("preprocessing center/scale length mismatch");
  return t;
}

} // namespace

json matrix_to_json(const DenseMatrix &m) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      data.push_back(m(i, j));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

DenseMatrix matrix_from_json(const json &j) {
  return parsing("matrix", [&] {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (rows < 0 || cols < 0 ||
        static_cast<std::size_t>(rows * cols) != data.size())
      throw ParseError(fmt::format("matrix {}x{} with {} entries", rows, cols,
                                   data.size()));
    DenseMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index c = 0; c < cols; ++c)
        m(i, c) = data[static_cast<std::size_t>(i * cols + c)];
    return m;
  });
}

json to_json(const RplsConfig &cfg) {
  return {{"lambda1", cfg.lambda1},
          {"lambda2", cfg.lambda2},
          {"alpha1_0", cfg.alpha1_0},
          {"alpha2_0", cfg.alpha2_0},
          {"rho", cfg.rho},
          {"alpha_max", cfg.alpha_max},
          {"tol", cfg.tol},
          {"k", cfg.k},
          {"max_iter", cfg.max_iter},
          {"preprocessing", std::string(to_string(cfg.preprocessing))}};
}

RplsConfig config_from_json(const json &j) {
  return parsing("config", [&] {
    RplsConfig cfg;
    cfg.lambda1 = j.at("lambda1").get<double>();
    cfg.lambda2 = j.at("lambda2").get<double>();
    cfg.alpha1_0 = j.at("alpha1_0").get<double>();
    cfg.alpha2_0 = j.at("alpha2_0").get<double>();
    cfg.rho = j.at("rho").get<double>();
    cfg.alpha_max = j.at("alpha_max").get<double>();
    cfg.tol = j.at("tol").get<double>();
    cfg.k = j.at("k").get<std::size_t>();
    cfg.max_iter = j.at("max_iter").get<std::size_t>();
    cfg.preprocessing =
        parse_preprocessing(j.at("preprocessing").get<std::string>());
    return cfg;
  });
}

RplsOverrides overrides_from_json(const json &j) {
  return parsing("config file", [&] {
    if (!j.is_object())
      throw ParseError("config file must hold a JSON object");
    static const std::vector<std::string> known = {
        "lambda1", "lambda2", "alpha1_0", "alpha2_0",  "rho",
        "alpha_max", "tol",   "k",        "max_iter", "preprocessing"};
    for (const auto &[key, _] : j.items())
      if (std::find(known.begin(), known.end(), key) == known.end())
        throw ParseError(fmt::format("config file: unknown key '{}'", key));

    RplsOverrides o;
    const auto num = [&](const char *key, std::optional<double> &dst) {
      if (j.contains(key))
        dst = j.at(key).get<double>();
    };
    const auto count = [&](const char *key, std::optional<std::size_t> &dst) {
      if (j.contains(key))
        dst = j.at(key).get<std::size_t>();
    };
    num("lambda1", o.lambda1);
    num("lambda2", o.lambda2);
    num("alpha1_0", o.alpha1_0);
    num("alpha2_0", o.alpha2_0);
    num("rho", o.rho);
    num("alpha_max", o.alpha_max);
    num("tol", o.tol);
    count("k", o.k);
    count("max_iter", o.max_iter);
    if (j.contains("preprocessing"))
      o.preprocessing =
          parse_preprocessing(j.at("preprocessing").get<std::string>());
    return o;
  });
}

json to_json(const RplsModel &model) {
  const RplsState &s = model.state;
  json trace = json::array();
  for (const TraceEntry &e : model.residual_trace)
    trace.push_back({{"iter", e.iter},
                     {"primal_residual", e.primal_residual},
                     {"alpha1", e.alpha1},
                     {"alpha2", e.alpha2}});
  return {
      {"schema", std::string(kModelSchema)},
      {"kind", "rpls"},
      {"method", std::string(to_string(MethodTag::kRplsProj))},
      {"dims",
       {{"n", s.q.rows()},
        {"p", s.lambda_x.rows()},
        {"r", s.lambda_y.rows()},
        {"k", s.q.cols()}}},
      {"config", to_json(model.config)},
      {"converged", model.converged},
      {"iterations", s.iter},
      {"alpha1", s.alpha1},
      {"alpha2", s.alpha2},
      {"residual_trace", std::move(trace)},
      {"preprocessing",
       {{"x_center", vector_to_json(model.x_transform.center)},
        {"x_scale", vector_to_json(model.x_transform.scale)},
        {"y_center", vector_to_json(model.y_transform.center)},
        {"y_scale", vector_to_json(model.y_transform.scale)}}},
      {"matrices",
       {{"q", matrix_to_json(s.q)},
        {"lambda_x", matrix_to_json(s.lambda_x)},
        {"lambda_y", matrix_to_json(s.lambda_y)},
        {"delta_x", matrix_to_json(s.delta_x)},
        {"delta_y", matrix_to_json(s.delta_y)},
        {"l", matrix_to_json(s.l)},
        {"m", matrix_to_json(s.m)}}},
  };
}

RplsModel rpls_model_from_json(const json &j) {
  if (model_kind(j) != ModelKind::kRpls)
    throw ParseError("model document is not an rpls model");
  return parsing("rpls model", [&] {
    RplsModel model;
    model.config = config_from_json(j.at("config"));
    model.converged = j.at("converged").get<bool>();
    for (const json &e : j.at("residual_trace"))
      model.residual_trace.push_back({e.at("iter").get<std::size_t>(),
                                      e.at("primal_residual").get<double>(),
                                      e.at("alpha1").get<double>(),
                                      e.at("alpha2").get<double>()});
    const json &pre = j.at("preprocessing");
    model.x_transform = transform_from_json(pre.at("x_center"), pre.at("x_scale"));
    model.y_transform = transform_from_json(pre.at("y_center"), pre.at("y_scale"));

    RplsState &s = model.state;
    const json &mats = j.at("matrices");
    s.q = matrix_from_json(mats.at("q"));
    s.lambda_x = matrix_from_json(mats.at("lambda_x"));
    s.lambda_y = matrix_from_json(mats.at("lambda_y"));
    s.delta_x = matrix_from_json(mats.at("delta_x"));
    s.delta_y = matrix_from_json(mats.at("delta_y"));
    s.l = matrix_from_json(mats.at("l"));
    s.m = matrix_from_json(mats.at("m"));
    s.alpha1 = j.at("alpha1").get<double>();
    s.alpha2 = j.at("alpha2").get<double>();
    s.iter = j.at("iterations").get<std::size_t>();

    const json &dims = j.at("dims");
    const auto n = dims.at("n").get<Eigen::Index>();
    const auto p = dims.at("p").get<Eigen::Index>();
    const auto r = dims.at("r").get<Eigen::Index>();
    const auto k = dims.at("k").get<Eigen::Index>();
    if (s.q.rows() != n || s.q.cols() != k || s.lambda_x.rows() != p ||
        s.lambda_x.cols() != k || s.lambda_y.rows() != r ||
        s.lambda_y.cols() != k || model.x_transform.cols() != p ||
        model.y_transform.cols() != r)
      throw ParseError("rpls model: matrix shapes disagree with dims");
    return model;
  });
}

json to_json(const LinearModel &model) {
  return {{"schema", std::string(kModelSchema)},
          {"kind", "linear"},
          {"method", std::string(to_string(model.method_tag))},
          {"dims", {{"p", model.theta.rows()}, {"r", model.theta.cols()}}},
          {"n_components", model.n_components},
          {"rank_deficient", model.rank_deficient},
          {"theta", matrix_to_json(model.theta)},
          {"x_means", vector_to_json(model.x_means)},
          {"y_means", vector_to_json(model.y_means)}};
}

LinearModel linear_model_from_json(const json &j) {
  if (model_kind(j) != ModelKind::kLinear)
    throw ParseError("model document is not a linear model");
  return parsing("linear model", [&] {
    LinearModel m;
    m.method_tag = parse_method(j.at("method").get<std::string>());
    m.n_components = j.at("n_components").get<std::size_t>();
    m.rank_deficient = j.at("rank_deficient").get<bool>();
    m.theta = matrix_from_json(j.at("theta"));
    m.x_means = vector_from_json(j.at("x_means"));
    m.y_means = vector_from_json(j.at("y_means"));
    if (m.x_means.size() != m.theta.rows() || m.y_means.size() != m.theta.cols())
      throw ParseError("linear model: means disagree with theta shape");
    return m;
  });
}

ModelKind model_kind(const json &j) {
  return parsing("model", [&] {
    if (!j.is_object() || j.value("schema", "") != kModelSchema)
      throw ParseError(
          fmt::format("model document lacks schema '{}'", kModelSchema));
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "rpls")
      return ModelKind::kRpls;
    if (kind == "linear")
      return ModelKind::kLinear;
    throw ParseError(fmt::format("unknown model kind '{}'", kind));
  });
}

json to_json(const ExperimentReport &report) {
  json methods = json::object();
  for (const auto &[tag, res] : report.results) {
    json entry;
    if (res.error) {
      entry["error"] = *res.error;
    } else {
      entry["nmse"] = res.nmse;
      entry["predictions"] = matrix_to_json(res.predictions);
      if (tag == MethodTag::kRplsProj) {
        entry["converged"] = res.converged;
        entry["iterations"] = res.iterations;
      }
    }
    methods[std::string(to_string(tag))] = std::move(entry);
  }
  return {{"dataset", report.dataset_tag},
          {"split", {{"train", report.split.train}, {"test", report.split.test}}},
          {"y_test", matrix_to_json(report.y_test)},
          {"methods", std::move(methods)}};
}

json load_json(const std::filesystem::path &path) {
  const std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void save_json(const std::filesystem::path &path, const json &j) {
  write_text(path, j.dump(2) + "\n");
}

} // namespace rpls
