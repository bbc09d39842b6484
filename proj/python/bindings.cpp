#include "csoigo/bench.hpp"
#include "csoigo/classify.hpp"
#include "csoigo/dataset.hpp"
#include "csoigo/error.hpp"
#include "csoigo/gradient.hpp"
#include "csoigo/image.hpp"
#include "csoigo/pipeline.hpp"
#include "csoigo/subspace.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace csoigo;

namespace {

GrayImage to_image(const Eigen::MatrixXd& px) { return GrayImage(px); }

std::vector<LabeledImage> labeled(const std::vector<Eigen::MatrixXd>& images, const std::vector<Label>& labels) {
  if (images.size() != labels.size()) throw InvalidArgument("images and labels differ in length");
  std::vector<LabeledImage> out;
  out.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) out.push_back({GrayImage(images[i]), labels[i]});
  return out;
}

RecognizerConfig make_config(const std::string& features, const std::string& classifier, Eigen::Index dim,
                             double lambda, Eigen::Index rows, Eigen::Index cols) {
  RecognizerConfig cfg;
  cfg.order = parse_feature_order(features);
  cfg.classifier = parse_classifier(classifier);
  cfg.dim = dim;
  cfg.lambda = lambda;
  cfg.rows = rows;
  cfg.cols = cols;
  return cfg;
}

py::dict prediction_dict(const Prediction& p) {
  py::dict scores;
  for (std::size_t c = 0; c < p.classes.size(); ++c) scores[py::str(p.classes[c])] = p.scores[static_cast<Eigen::Index>(c)];
  py::dict out;
  out["label"] = p.label;
  out["score"] = p.score;
  out["scores"] = scores;
  return out;
}

py::dict row_dict(const ResultRow& r) {
  py::dict out;
  out["config"] = r.config;
  out["feature"] = std::string(to_string(r.order));
  out["classifier"] = std::string(to_string(r.classifier));
  out["p"] = r.occlusion;
  out["d"] = r.dim;
  out["n_train"] = r.n_train;
  out["n_test"] = r.n_test;
  out["seed"] = r.seed;
  out["accuracy"] = r.accuracy;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Second-order gradient orientation face recognition";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());

  m.def("load_image", [](const std::filesystem::path& p) { return load_image(p).pixels(); }, py::arg("path"),
        "Grayscale pixels of a PNG or 8-bit PGM file as a float64 array.");
  m.def("save_image", [](const Eigen::MatrixXd& px, const std::filesystem::path& p) { save_image(to_image(px), p); },
        py::arg("pixels"), py::arg("path"));
  m.def("resize", [](const Eigen::MatrixXd& px, Eigen::Index rows, Eigen::Index cols) {
    return resize(to_image(px), rows, cols).pixels();
  }, py::arg("pixels"), py::arg("rows"), py::arg("cols"));
  m.def("occlusion_side", &occlusion_side, py::arg("percentage"), py::arg("rows"), py::arg("cols"));
  m.def("occlude", [](const Eigen::MatrixXd& px, double percentage, std::optional<Eigen::MatrixXd> occluder,
                      std::uint64_t seed) {
    OcclusionSpec spec;
    spec.percentage = percentage;
    spec.seed = seed;
    if (occluder) spec.occluder = to_image(*occluder);
    const OccludedImage r = occlude(to_image(px), spec);
    return py::make_tuple(r.image.pixels(), py::make_tuple(r.region.row, r.region.col, r.region.side));
  }, py::arg("pixels"), py::arg("percentage"), py::arg("occluder") = py::none(), py::arg("seed") = 0,
     "Returns (occluded pixels, (row, col, side)).");

  m.def("first_order_gradients", [](const Eigen::MatrixXd& px) {
    const GradientPair g = first_order_gradients(to_image(px));
    return py::make_tuple(g.gx, g.gy);
  }, py::arg("pixels"));
  m.def("second_order_gradients", [](const Eigen::MatrixXd& px) {
    const GradientPair g = second_order_gradients(to_image(px));
    return py::make_tuple(g.gx, g.gy);
  }, py::arg("pixels"));
  m.def("orientation_field", [](const Eigen::MatrixXd& gx, const Eigen::MatrixXd& gy) {
    return orientation_field(GradientPair{gx, gy});
  }, py::arg("gx"), py::arg("gy"));
  m.def("complex_map", &complex_map, py::arg("phi"));
  m.def("extract", [](const Eigen::MatrixXd& px, const std::string& order) {
    return extract(to_image(px), parse_feature_order(order));
  }, py::arg("pixels"), py::arg("order") = "second");

  py::class_<SubspaceModel>(m, "SubspaceModel")
      .def_readonly("basis", &SubspaceModel::basis)
      .def_readonly("spectrum", &SubspaceModel::spectrum)
      .def_readonly("effective_rank", &SubspaceModel::effective_rank)
      .def_property_readonly("dim", &SubspaceModel::dim)
      .def("truncated", &SubspaceModel::truncated, py::arg("d"))
      .def("project", [](const SubspaceModel& s, const Eigen::MatrixXcd& x) { return project_all(s, x); },
           py::arg("features"))
      .def("reconstruction_error", [](const SubspaceModel& s, const Eigen::MatrixXcd& x) {
        return reconstruction_error(s, x);
      }, py::arg("features"));
  m.def("fit_complex_pca", &fit_complex_pca, py::arg("features"), py::arg("d"),
        "Complex PCA of a K x N feature matrix (one column per sample).");

  m.def("stack_real_imag", [](const Eigen::MatrixXcd& z) { return stack_real_imag(z); }, py::arg("embeddings"));

  py::class_<CrcCoder>(m, "CrcCoder")
      .def(py::init([](const Eigen::MatrixXd& atoms, std::vector<Label> labels, double lambda) {
        return CrcCoder(make_dictionary(atoms, std::move(labels)), lambda);
      }), py::arg("atoms"), py::arg("labels"), py::arg("lam") = kDefaultLambda)
      .def_property_readonly("lam", &CrcCoder::lambda)
      .def_property_readonly("solve_operator", &CrcCoder::solve_operator)
      .def("code", [](const CrcCoder& c, const Eigen::VectorXd& y) { return crc_code(c, y).alpha; }, py::arg("query"))
      .def("classify", [](const CrcCoder& c, const Eigen::VectorXd& y) {
        const Decision d = crc_classify(c, y);
        return py::make_tuple(d.label, d.scores);
      }, py::arg("query"), "Returns (label, residual per class in sorted label order).");
  m.def("nnc_classify", [](const Eigen::MatrixXd& atoms, std::vector<Label> labels, const Eigen::VectorXd& y) {
    const Decision d = nnc_classify(make_dictionary(atoms, std::move(labels)), y);
    return py::make_tuple(d.label, d.scores);
  }, py::arg("atoms"), py::arg("labels"), py::arg("query"));

  py::class_<Recognizer>(m, "Recognizer")
      .def_property_readonly("name", [](const Recognizer& r) { return r.config().name(); })
      .def_property_readonly("dim", [](const Recognizer& r) { return r.config().dim; })
      .def_property_readonly("lam", [](const Recognizer& r) { return r.config().lambda; })
      .def_property_readonly("shape", [](const Recognizer& r) { return py::make_tuple(r.config().rows, r.config().cols); })
      .def_property_readonly("classes", &Recognizer::classes)
      .def_property_readonly("model", &Recognizer::model)
      .def_property_readonly("dictionary", [](const Recognizer& r) { return r.dictionary().atoms; })
      .def("embed", [](const Recognizer& r, const Eigen::MatrixXd& px) { return r.embed(to_image(px)); },
           py::arg("pixels"))
      .def("predict", [](const Recognizer& r, const Eigen::MatrixXd& px) { return prediction_dict(r.predict(to_image(px))); },
           py::arg("pixels"))
      .def("save", [](const Recognizer& r, const std::filesystem::path& p) { save(r, p); }, py::arg("path"));

  m.def("fit", [](const std::vector<Eigen::MatrixXd>& images, const std::vector<Label>& labels,
                  const std::string& features, const std::string& classifier, Eigen::Index dim, double lam,
                  Eigen::Index rows, Eigen::Index cols) {
    const Eigen::Index d =
        dim == 0 ? std::min<Eigen::Index>(rows * cols, static_cast<Eigen::Index>(images.size())) : dim;
    return fit(labeled(images, labels), make_config(features, classifier, d, lam, rows, cols));
  }, py::arg("images"), py::arg("labels"), py::arg("features") = "second", py::arg("classifier") = "crc",
     py::arg("dim") = 0, py::arg("lam") = kDefaultLambda, py::arg("rows") = kDefaultRows,
     py::arg("cols") = kDefaultCols, "Fits a recognizer; dim=0 uses min(K, N).");
  m.def("load", [](const std::filesystem::path& p) { return load(p); }, py::arg("path"));

  m.def("evaluate", [](const std::filesystem::path& manifest, const std::vector<std::string>& configs,
                       const std::vector<double>& occlusions, std::optional<std::filesystem::path> occluder,
                       const std::vector<std::uint64_t>& seeds, Eigen::Index dim, double lam, Eigen::Index rows,
                       Eigen::Index cols) {
    ExperimentSpec spec;
    spec.manifest = manifest;
    for (const auto& name : configs) {
      const auto dash = name.find('-');
      if (dash == std::string::npos) throw InvalidArgument("config '" + name + "' is not <feature>-<classifier>");
      spec.configs.push_back(make_config(name.substr(0, dash), name.substr(dash + 1), dim, lam, rows, cols));
    }
    spec.occlusions = occlusions;
    spec.occluder = occluder;
    spec.seeds = seeds;
    const ResultTable table = run(spec);
    py::list rows_out;
    for (const auto& r : table.rows) rows_out.append(row_dict(r));
    return rows_out;
  }, py::arg("manifest"), py::arg("configs") = std::vector<std::string>{"second-crc"},
     py::arg("occlusions") = std::vector<double>{0.0}, py::arg("occluder") = py::none(),
     py::arg("seeds") = std::vector<std::uint64_t>{0}, py::arg("dim") = 0, py::arg("lam") = kDefaultLambda,
     py::arg("rows") = kDefaultRows, py::arg("cols") = kDefaultCols,
     "Occlusion benchmark; one dict per (config, p, seed) row.");
}
