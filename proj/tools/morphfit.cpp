/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: tools/morphfit.cpp
 *
 * Copyright 2026 The morphfit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "morphfit/features/features.hpp"
#include "morphfit/fitting/fit.hpp"
#include "morphfit/fitting/metrics.hpp"
#include "morphfit/io/camera_io.hpp"
#include "morphfit/io/image_io.hpp"
#include "morphfit/io/mesh_io.hpp"
#include "morphfit/io/model_io.hpp"
#include "morphfit/io/pts_io.hpp"
#include "morphfit/synth/synthetic.hpp"
#include "morphfit/texture/builder.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* k_version = "morphfit 0.1.0";

/// FNV-1a 64-bit hash of a file's bytes, for the run manifest.
std::string file_hash(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in.good())
        throw std::runtime_error("cannot read input file: " + path);
    std::uint64_t h = 1469598103934665603ull;
    char buffer[8192];
    while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0)
    {
        for (std::streamsize i = 0; i < in.gcount(); ++i)
        {
            h ^= static_cast<unsigned char>(buffer[i]);
            h *= 1099511628211ull;
        }
        if (!in)
            break;
    }
    char hex[32];
    std::snprintf(hex, sizeof(hex), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return hex;
}

/// Run manifest: command, config snapshot, input hashes, seed and timings.
struct Manifest
{
    json data;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    Manifest(const std::string& command, std::uint64_t seed)
    {
        data["command"] = command;
        data["version"] = k_version;
        data["seed"] = seed;
        data["config"] = json::object();
        data["inputs"] = json::object();
    }

    void input(const std::string& path) { data["inputs"][path] = file_hash(path); }

    void write(const fs::path& out_dir)
    {
        const auto elapsed = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
        data["timings"] = {{"total_seconds", elapsed}};
        std::ofstream out(out_dir / "manifest.json");
        out << data.dump(2) << "\n";
    }
};

json vector_to_json(const Eigen::VectorXd& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v[i]);
    return out;
}

Eigen::VectorXd vector_from_json(const json& j)
{
    Eigen::VectorXd out(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out[i] = j.at(i).get<double>();
    return out;
}

std::vector<std::string> sorted_files(const std::string& dir,
                                      const std::vector<std::string>& extensions)
{
    std::vector<std::string> out;
    if (!fs::is_directory(dir))
        throw std::runtime_error("not a directory: " + dir);
    for (const auto& entry : fs::directory_iterator(dir))
    {
        if (!entry.is_regular_file())
            continue;
        const std::string ext = entry.path().extension().string();
        if (std::find(extensions.begin(), extensions.end(), ext) != extensions.end())
            out.push_back(entry.path().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthArgs
{
    std::uint64_t seed = 0;
    std::string out_dir;
    int n_target = 2500;
    int n_shape = 30;
    int n_texture = 50;
    int channels = 3;
    int height = 256;
    int width = 256;
};

int run_synth(const SynthArgs& args)
{
    morphfit::synth::SceneOptions opts;
    opts.n_target = args.n_target;
    opts.model.n_shape = args.n_shape;
    opts.model.n_texture = args.n_texture;
    opts.model.channels = args.channels;
    opts.height = args.height;
    opts.width = args.width;

    Manifest manifest("synth", args.seed);
    manifest.data["config"] = {{"n_target", args.n_target}, {"n_shape", args.n_shape},
                               {"n_texture", args.n_texture}, {"channels", args.channels},
                               {"height", args.height},       {"width", args.width}};

    const morphfit::synth::SyntheticScene scene = morphfit::synth::make_synthetic_scene(args.seed, opts);

    fs::create_directories(args.out_dir);
    const fs::path dir(args.out_dir);
    morphfit::io::save_shape_model((dir / "shape.model").string(), scene.shape_model);
    morphfit::io::save_texture_model((dir / "texture.model").string(), scene.texture_model);
    if (scene.image.channels() == 1 || scene.image.channels() == 3)
        morphfit::io::write_png((dir / "image.png").string(), scene.image);
    morphfit::io::write_pts((dir / "landmarks.pts").string(), scene.landmarks);
    morphfit::io::write_ply((dir / "truth.ply").string(),
                            morphfit::model::shape_instance(scene.shape_model, scene.p_true));

    json truth;
    truth["p"] = vector_to_json(scene.p_true);
    truth["lambda"] = vector_to_json(scene.lambda_true);
    truth["camera"] = morphfit::io::camera_to_json(scene.camera_true);
    truth["interocular"] = scene.interocular;
    truth["landmark_vertex_ids"] = scene.shape_model.landmark_vertex_ids;
    std::ofstream(dir / "truth.json") << truth.dump(2) << "\n";

    manifest.write(dir);
    std::cout << "synth: wrote scene (N=" << scene.shape_model.num_vertices() << ", C="
              << scene.texture_model.channels << ") to " << args.out_dir << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// build-texture
// ---------------------------------------------------------------------------

struct BuildTextureArgs
{
    std::string images_dir;
    std::string landmarks_dir;
    std::string shape_model_path;
    std::string features = "identity";
    int rounds = 1;
    int n_texture = 50;
    std::string out_path;
    std::uint64_t seed = 0;
};

int run_build_texture(const BuildTextureArgs& args)
{
    Manifest manifest("build-texture", args.seed);
    manifest.data["config"] = {{"features", args.features},
                               {"rounds", args.rounds},
                               {"n_texture", args.n_texture},
                               {"images", args.images_dir},
                               {"landmarks", args.landmarks_dir}};
    manifest.input(args.shape_model_path);

    const morphfit::model::ShapeModel shape_model =
        morphfit::io::load_shape_model(args.shape_model_path);
    const morphfit::features::FeatureExtractor extractor =
        morphfit::features::descriptor_registry(args.features);

    const std::vector<std::string> image_paths =
        sorted_files(args.images_dir, {".png", ".ppm", ".pgm"});
    if (image_paths.empty())
        throw std::runtime_error("no images found in " + args.images_dir);

    std::vector<morphfit::Image> images;
    std::vector<Eigen::VectorXd> landmarks;
    for (const auto& path : image_paths)
    {
        manifest.input(path);
        images.push_back(morphfit::io::read_image(path));
        const fs::path pts =
            fs::path(args.landmarks_dir) / (fs::path(path).stem().string() + ".pts");
        manifest.input(pts.string());
        landmarks.push_back(morphfit::io::read_pts(pts.string()));
    }

    morphfit::texture::RefinementOptions opts;
    opts.n_texture = args.n_texture;
    opts.fit.seed = args.seed;
    const morphfit::model::TextureModel model = morphfit::texture::iterative_refinement(
        images, landmarks, shape_model, extractor, args.rounds, opts);

    morphfit::io::save_texture_model(args.out_path, model);
    manifest.data["round_residuals"] = opts.round_residuals;
    manifest.write(fs::path(args.out_path).parent_path().empty()
                       ? fs::path(".")
                       : fs::path(args.out_path).parent_path());
    std::cout << "build-texture: " << images.size() << " images, " << args.rounds
              << " round(s); residuals:";
    for (double r : opts.round_residuals)
        std::cout << " " << r;
    std::cout << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

struct FitArgs
{
    std::string image_path;
    std::string landmarks_path;
    std::string shape_model_path;
    std::string texture_model_path;
    std::string features = "identity";
    std::string algorithm = "project-out";
    std::string out_dir;
    double landmark_weight = -1.0;
    double shape_prior = 1e-2;
    double texture_prior = 1e-2;
    int k = 5000;
    int max_iters = 50;
    double step_tol = 1e-6;
    double focal = -1.0;
    bool optimize_focal = false;
    bool resample_mask = false;
    std::uint64_t seed = 0;
};

void write_fit_log_csv(const std::string& path,
                       const std::vector<morphfit::fitting::IterationLogEntry>& log)
{
    std::ofstream out(path);
    out << "iteration,cost_before,cost_after,data,landmark,shape_prior,texture_prior,"
           "step_p_norm,step_c_norm,halvings,accepted,active_count\n";
    char line[512];
    for (const auto& e : log)
    {
        std::snprintf(line, sizeof(line),
                      "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,%d\n",
                      e.iteration, e.cost_before, e.cost_after, e.data, e.landmark,
                      e.shape_prior, e.texture_prior, e.step_p_norm, e.step_c_norm, e.halvings,
                      e.accepted ? 1 : 0, e.active_count);
        out << line;
    }
}

int run_fit(const FitArgs& args)
{
    Manifest manifest("fit", args.seed);
    manifest.data["config"] = {{"features", args.features},
                               {"algorithm", args.algorithm},
                               {"landmark_weight", args.landmark_weight},
                               {"shape_prior", args.shape_prior},
                               {"texture_prior", args.texture_prior},
                               {"k", args.k},
                               {"max_iters", args.max_iters},
                               {"step_tol", args.step_tol},
                               {"focal", args.focal},
                               {"optimize_focal", args.optimize_focal},
                               {"resample_mask", args.resample_mask}};
    manifest.input(args.image_path);
    manifest.input(args.landmarks_path);
    manifest.input(args.shape_model_path);
    manifest.input(args.texture_model_path);

    const morphfit::Image image = morphfit::io::read_image(args.image_path);
    const Eigen::VectorXd landmarks = morphfit::io::read_pts(args.landmarks_path);
    const morphfit::model::ShapeModel shape_model =
        morphfit::io::load_shape_model(args.shape_model_path);
    const morphfit::model::TextureModel texture_model =
        morphfit::io::load_texture_model(args.texture_model_path);
    const morphfit::features::FeatureExtractor extractor =
        morphfit::features::descriptor_registry(args.features);

    morphfit::fitting::FitConfig cfg;
    cfg.landmark_weight = args.landmark_weight;
    cfg.shape_prior = args.shape_prior;
    cfg.texture_prior = args.texture_prior;
    cfg.residual_mask_size = args.k;
    cfg.max_iters = args.max_iters;
    cfg.step_tol = args.step_tol;
    cfg.algorithm = morphfit::fitting::algorithm_from_string(args.algorithm);
    cfg.optimize_focal = args.optimize_focal;
    cfg.resample_mask_per_iteration = args.resample_mask;
    cfg.seed = args.seed;
    cfg.focal_length = args.focal;

    const morphfit::fitting::FitResult result = morphfit::fitting::fit(
        image, landmarks, shape_model, texture_model, extractor, cfg);

    fs::create_directories(args.out_dir);
    const fs::path dir(args.out_dir);
    morphfit::io::write_obj((dir / "fitted.obj").string(), result.mesh);
    morphfit::io::write_ply((dir / "fitted.ply").string(), result.mesh);
    write_fit_log_csv((dir / "iterations.csv").string(), result.log);

    json params;
    params["p"] = vector_to_json(result.state.p);
    params["lambda"] = vector_to_json(result.state.lambda);
    params["camera"] = morphfit::io::camera_to_json(result.state.cam);
    params["converged"] = result.converged;
    params["iterations"] = result.log.size();
    params["algorithm"] = args.algorithm;
    std::ofstream(dir / "params.json") << params.dump(2) << "\n";

    manifest.write(dir);
    std::cout << "fit: " << (result.converged ? "converged" : "stopped") << " after "
              << result.log.size() << " iteration(s); final cost "
              << (result.log.empty() ? 0.0 : result.log.back().cost_after) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs
{
    std::vector<std::string> fitted;
    std::vector<std::string> truth;
    double interocular = -1.0;
    std::string truth_json; // optional source of the interocular distance
    double threshold = 0.05;
    std::string out_dir;
};

morphfit::TriMesh read_mesh_any(const std::string& path)
{
    const std::string ext = fs::path(path).extension().string();
    if (ext == ".obj")
        return morphfit::io::read_obj(path);
    if (ext == ".ply")
        return morphfit::io::read_ply(path);
    throw std::runtime_error("unsupported mesh format: " + path);
}

int run_eval(const EvalArgs& args)
{
    if (args.fitted.size() != args.truth.size())
        throw std::runtime_error("eval: --fitted and --truth must pair up");

    Manifest manifest("eval", 0);
    manifest.data["config"] = {{"threshold", args.threshold},
                               {"interocular", args.interocular}};

    double interocular = args.interocular;
    if (!args.truth_json.empty())
    {
        manifest.input(args.truth_json);
        std::ifstream in(args.truth_json);
        json truth = json::parse(in);
        interocular = truth.at("interocular").get<double>();
    }
    if (!(interocular > 0.0))
        throw std::runtime_error("eval: provide --interocular or --truth-json");

    fs::create_directories(args.out_dir);
    const fs::path dir(args.out_dir);

    std::vector<double> pooled;
    json scenes = json::array();
    for (std::size_t i = 0; i < args.fitted.size(); ++i)
    {
        manifest.input(args.fitted[i]);
        manifest.input(args.truth[i]);
        const morphfit::TriMesh fitted = read_mesh_any(args.fitted[i]);
        const morphfit::TriMesh truth = read_mesh_any(args.truth[i]);
        const Eigen::VectorXd errors =
            morphfit::fitting::normalized_dense_error(fitted, truth, interocular);

        std::ofstream csv(dir / ("errors_" + std::to_string(i) + ".csv"));
        csv << "vertex,error\n";
        char line[64];
        for (Eigen::Index v = 0; v < errors.size(); ++v)
        {
            std::snprintf(line, sizeof(line), "%lld,%.17g\n", static_cast<long long>(v),
                          errors[v]);
            csv << line;
        }

        std::vector<double> err_vec(errors.data(), errors.data() + errors.size());
        const morphfit::fitting::CedSummary summary =
            morphfit::fitting::ced_auc(err_vec, args.threshold);
        scenes.push_back({{"fitted", args.fitted[i]},
                          {"truth", args.truth[i]},
                          {"auc", summary.auc},
                          {"failure_rate", summary.failure_rate},
                          {"mean_error", errors.mean()}});
        pooled.insert(pooled.end(), err_vec.begin(), err_vec.end());
    }

    const morphfit::fitting::CedSummary overall =
        morphfit::fitting::ced_auc(pooled, args.threshold);
    const std::vector<double> ced =
        morphfit::fitting::ced_samples(pooled, args.threshold, 513);
    {
        std::ofstream csv(dir / "ced.csv");
        csv << "x,fraction\n";
        char line[64];
        for (std::size_t k = 0; k < ced.size(); ++k)
        {
            const double x = args.threshold * static_cast<double>(k) / (ced.size() - 1);
            std::snprintf(line, sizeof(line), "%.17g,%.17g\n", x, ced[k]);
            csv << line;
        }
    }

    json report;
    report["threshold"] = args.threshold;
    report["interocular"] = interocular;
    report["auc"] = overall.auc;
    report["failure_rate"] = overall.failure_rate;
    report["scenes"] = scenes;
    std::ofstream(dir / "report.json") << report.dump(2) << "\n";

    manifest.write(dir);
    std::cout << "eval: AUC " << overall.auc << ", failure rate " << overall.failure_rate
              << " over " << args.fitted.size() << " scene(s)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"morphfit: statistical 3D morphable model construction and fitting"};
    app.set_version_flag("--version", k_version);
    app.require_subcommand(1);

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "generate a synthetic ground-truth scene");
    synth->add_option("--seed", synth_args.seed, "random seed");
    synth->add_option("--out", synth_args.out_dir, "output directory")->required();
    synth->add_option("--n-target", synth_args.n_target, "minimum vertex count")
        ->check(CLI::Range(100, 200000));
    synth->add_option("--n-shape", synth_args.n_shape, "shape components");
    synth->add_option("--n-texture", synth_args.n_texture, "texture components");
    synth->add_option("--channels", synth_args.channels, "texture channels")
        ->check(CLI::IsMember({1, 3}));
    synth->add_option("--height", synth_args.height, "image height");
    synth->add_option("--width", synth_args.width, "image width");

    BuildTextureArgs bt_args;
    auto* bt = app.add_subcommand("build-texture", "build a texture model from images");
    bt->add_option("--images", bt_args.images_dir, "image directory")->required();
    bt->add_option("--landmarks", bt_args.landmarks_dir, "pts directory")->required();
    bt->add_option("--shape-model", bt_args.shape_model_path, "shape model file")->required();
    bt->add_option("--features", bt_args.features, "feature descriptor name");
    bt->add_option("--rounds", bt_args.rounds, "refinement rounds")->check(CLI::PositiveNumber);
    bt->add_option("--n-texture", bt_args.n_texture, "texture components to keep");
    bt->add_option("--out", bt_args.out_path, "output texture model file")->required();
    bt->add_option("--seed", bt_args.seed, "random seed");

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "fit the morphable model to an image");
    fit->add_option("--image", fit_args.image_path, "input image")->required();
    fit->add_option("--landmarks", fit_args.landmarks_path, "pts landmark file")->required();
    fit->add_option("--shape-model", fit_args.shape_model_path, "shape model file")->required();
    fit->add_option("--texture-model", fit_args.texture_model_path, "texture model file")
        ->required();
    fit->add_option("--features", fit_args.features, "feature descriptor name");
    fit->add_option("--algorithm", fit_args.algorithm, "optimization algorithm")
        ->check(CLI::IsMember({"project-out", "simultaneous"}));
    fit->add_option("--out", fit_args.out_dir, "output directory")->required();
    fit->add_option("--landmark-weight", fit_args.landmark_weight,
                    "landmark term weight (negative = auto)");
    fit->add_option("--shape-prior", fit_args.shape_prior, "shape prior weight");
    fit->add_option("--texture-prior", fit_args.texture_prior, "texture prior weight");
    fit->add_option("--k", fit_args.k, "residual mask size")->check(CLI::PositiveNumber);
    fit->add_option("--max-iters", fit_args.max_iters, "iteration cap")
        ->check(CLI::PositiveNumber);
    fit->add_option("--step-tol", fit_args.step_tol, "step-norm stopping tolerance");
    fit->add_option("--focal", fit_args.focal, "fixed focal length (negative = auto)");
    fit->add_flag("--optimize-focal", fit_args.optimize_focal, "optimize the focal length");
    fit->add_flag("--resample-mask", fit_args.resample_mask,
                  "redraw the residual mask every iteration");
    fit->add_option("--seed", fit_args.seed, "random seed");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "dense error metrics against ground truth");
    eval->add_option("--fitted", eval_args.fitted, "fitted mesh file(s)")->required();
    eval->add_option("--truth", eval_args.truth, "ground-truth mesh file(s)")->required();
    eval->add_option("--interocular", eval_args.interocular, "inter-ocular distance");
    eval->add_option("--truth-json", eval_args.truth_json,
                     "truth.json providing the inter-ocular distance");
    eval->add_option("--threshold", eval_args.threshold, "CED threshold")
        ->check(CLI::PositiveNumber);
    eval->add_option("--out", eval_args.out_dir, "output directory")->required();

    try
    {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e)
    {
        return app.exit(e);
    } catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return 2;
    }

    try
    {
        if (synth->parsed())
            return run_synth(synth_args);
        if (bt->parsed())
            return run_build_texture(bt_args);
        if (fit->parsed())
            return run_fit(fit_args);
        if (eval->parsed())
            return run_eval(eval_args);
    } catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
