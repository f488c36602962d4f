#include "bdn/checkpoint.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace bdn {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) data.push_back(m(i, k));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw std::runtime_error("checkpoint: matrix size mismatch");
  }
  Eigen::MatrixXd m(rows, cols);
  Eigen::Index p = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = data[p++].get<double>();
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json data = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) data.push_back(v(i));
  return data;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = j[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

}  // namespace

json to_json(const NetworkShape& shape) {
  const auto& act = shape.activation;
  return json{{"input_dim", shape.input_dim},
              {"output_dim", shape.output_dim},
              {"hidden", shape.hidden},
              {"activation",
               {{"name", act.name()},
                {"slopes", act.slopes()},
                {"intercepts", act.intercepts()},
                {"knots", act.knots()}}}};
}

NetworkShape shape_from_json(const json& j) {
  NetworkShape shape;
  shape.input_dim = j.at("input_dim").get<int>();
  shape.output_dim = j.at("output_dim").get<int>();
  shape.hidden = j.at("hidden").get<std::vector<int>>();
  const auto& a = j.at("activation");
  shape.activation = PiecewiseLinearActivation(
      a.at("slopes").get<std::vector<double>>(), a.at("intercepts").get<std::vector<double>>(),
      a.at("knots").get<std::vector<double>>(), a.at("name").get<std::string>());
  return shape;
}

json to_json(const PriorConfig& prior) {
  return json{{"a_weight", prior.a_weight},   {"b_weight", prior.b_weight},
              {"a_bias", prior.a_bias},       {"b_bias", prior.b_bias},
              {"a_preact", prior.a_preact},   {"b_preact", prior.b_preact},
              {"a_postact", prior.a_postact}, {"b_postact", prior.b_postact}};
}

PriorConfig prior_from_json(const json& j) {
  PriorConfig p;
  p.a_weight = j.at("a_weight").get<double>();
  p.b_weight = j.at("b_weight").get<double>();
  p.a_bias = j.at("a_bias").get<double>();
  p.b_bias = j.at("b_bias").get<double>();
  p.a_preact = j.at("a_preact").get<double>();
  p.b_preact = j.at("b_preact").get<double>();
  p.a_postact = j.at("a_postact").get<double>();
  p.b_postact = j.at("b_postact").get<double>();
  return p;
}

json to_json(const GibbsConfig& config) {
  return json{{"total_sweeps", config.total_sweeps},
              {"burnin", config.burnin},
              {"thin", config.thin},
              {"init", config.init == GibbsConfig::Init::pretrain ? "pretrain" : "random"},
              {"pretrain_steps", config.pretrain_steps},
              {"pretrain_lr", config.pretrain_lr},
              {"variance_floor", config.variance_floor},
              {"seed", config.seed}};
}

GibbsConfig gibbs_from_json(const json& j) {
  GibbsConfig c;
  c.total_sweeps = j.at("total_sweeps").get<int>();
  c.burnin = j.at("burnin").get<int>();
  c.thin = j.at("thin").get<int>();
  const auto init = j.at("init").get<std::string>();
  if (init == "pretrain") {
    c.init = GibbsConfig::Init::pretrain;
  } else if (init == "random") {
    c.init = GibbsConfig::Init::random;
  } else {
    throw std::runtime_error("checkpoint: unknown init mode '" + init + "'");
  }
  c.pretrain_steps = j.at("pretrain_steps").get<int>();
  c.pretrain_lr = j.at("pretrain_lr").get<double>();
  c.variance_floor = j.at("variance_floor").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

json to_json(const ModelParams& params) {
  json layers = json::array();
  for (const auto& layer : params.layers) {
    layers.push_back(json{{"weights", matrix_to_json(layer.weights)},
                          {"biases", vector_to_json(layer.biases)},
                          {"preact_var", vector_to_json(layer.preact_var)},
                          {"postact_var", vector_to_json(layer.postact_var)}});
  }
  json whv = json::array(), bhv = json::array();
  for (const auto& m : params.weight_hypervar) whv.push_back(matrix_to_json(m));
  for (const auto& v : params.bias_hypervar) bhv.push_back(vector_to_json(v));
  return json{{"layers", std::move(layers)},
              {"weight_hypervar", std::move(whv)},
              {"bias_hypervar", std::move(bhv)}};
}

ModelParams params_from_json(const json& j) {
  ModelParams p;
  for (const auto& lj : j.at("layers")) {
    LayerParams layer;
    layer.weights = matrix_from_json(lj.at("weights"));
    layer.biases = vector_from_json(lj.at("biases"));
    layer.preact_var = vector_from_json(lj.at("preact_var"));
    layer.postact_var = vector_from_json(lj.at("postact_var"));
    p.layers.push_back(std::move(layer));
  }
  for (const auto& mj : j.at("weight_hypervar")) p.weight_hypervar.push_back(matrix_from_json(mj));
  for (const auto& vj : j.at("bias_hypervar")) p.bias_hypervar.push_back(vector_from_json(vj));
  return p;
}

json to_json(const LatentState& latents) {
  json u = json::array(), v = json::array();
  for (const auto& m : latents.u) u.push_back(matrix_to_json(m));
  for (const auto& m : latents.v) v.push_back(matrix_to_json(m));
  return json{{"u", std::move(u)}, {"v", std::move(v)}};
}

LatentState latents_from_json(const json& j) {
  LatentState s;
  for (const auto& mj : j.at("u")) s.u.push_back(matrix_from_json(mj));
  for (const auto& mj : j.at("v")) s.v.push_back(matrix_from_json(mj));
  return s;
}

json to_json(const StandardizationRecord& record) {
  return json{{"x_mean", vector_to_json(record.x_mean)},
              {"x_scale", vector_to_json(record.x_scale)},
              {"y_mean", vector_to_json(record.y_mean)},
              {"y_scale", vector_to_json(record.y_scale)}};
}

StandardizationRecord standardization_from_json(const json& j) {
  StandardizationRecord r;
  r.x_mean = vector_from_json(j.at("x_mean"));
  r.x_scale = vector_from_json(j.at("x_scale"));
  r.y_mean = vector_from_json(j.at("y_mean"));
  r.y_scale = vector_from_json(j.at("y_scale"));
  return r;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  json draws = json::array();
  for (const auto& p : ckpt.draws) draws.push_back(to_json(p));
  json doc{{"format", "bdn-checkpoint"},
           {"version", Checkpoint::kVersion},
           {"shape", to_json(ckpt.shape)},
           {"prior", to_json(ckpt.prior)},
           {"gibbs", to_json(ckpt.gibbs)},
           {"standardization",
            ckpt.standardization ? to_json(*ckpt.standardization) : json(nullptr)},
           {"draws", std::move(draws)},
           {"log_joint", ckpt.log_joint},
           {"state",
            {{"params", to_json(ckpt.state.params)},
             {"latents", to_json(ckpt.state.latents)},
             {"sweeps_done", ckpt.state.sweeps_done}}}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint '" + path + "'");
  out << doc.dump(1) << '\n';
  if (!out) throw std::runtime_error("write failed for checkpoint '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read checkpoint '" + path + "'");
  json doc = json::parse(in);
  if (doc.at("format").get<std::string>() != "bdn-checkpoint") {
    throw std::runtime_error("'" + path + "' is not a checkpoint file");
  }
  if (doc.at("version").get<int>() != Checkpoint::kVersion) {
    throw std::runtime_error("unsupported checkpoint version in '" + path + "'");
  }
  Checkpoint ckpt;
  ckpt.shape = shape_from_json(doc.at("shape"));
  ckpt.prior = prior_from_json(doc.at("prior"));
  ckpt.gibbs = gibbs_from_json(doc.at("gibbs"));
  if (!doc.at("standardization").is_null()) {
    ckpt.standardization = standardization_from_json(doc.at("standardization"));
  }
  for (const auto& dj : doc.at("draws")) ckpt.draws.push_back(params_from_json(dj));
  ckpt.log_joint = doc.at("log_joint").get<std::vector<double>>();
  const auto& st = doc.at("state");
  ckpt.state.params = params_from_json(st.at("params"));
  ckpt.state.latents = latents_from_json(st.at("latents"));
  ckpt.state.sweeps_done = st.at("sweeps_done").get<int>();
  return ckpt;
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
  json doc{{"format", "bdn-dataset-manifest"},
           {"kind", manifest.kind},
           {"n", manifest.n},
           {"seed", manifest.seed},
           {"csv_path", manifest.csv_path}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest '" + path + "'");
  out << doc.dump(1) << '\n';
}

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read manifest '" + path + "'");
  json doc = json::parse(in);
  if (doc.at("format").get<std::string>() != "bdn-dataset-manifest") {
    throw std::runtime_error("'" + path + "' is not a dataset manifest");
  }
  DatasetManifest m;
  m.kind = doc.at("kind").get<std::string>();
  m.n = doc.at("n").get<int>();
  m.seed = doc.at("seed").get<std::uint64_t>();
  m.csv_path = doc.at("csv_path").get<std::string>();
  return m;
}

}  // namespace bdn
