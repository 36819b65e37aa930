/*
 * Copyright 2026 The vecaxis Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end. Run `vecaxis --help` or `vecaxis <command> --help`.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vecaxis/comparison.hpp"
#include "vecaxis/dimreduce.hpp"
#include "vecaxis/error.hpp"
#include "vecaxis/filtering.hpp"
#include "vecaxis/projection.hpp"
#include "vecaxis/serialize.hpp"
#include "vecaxis/service.hpp"
#include "vecaxis/svg.hpp"

using namespace vecaxis;

namespace {

constexpr int kUsageExit = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpaceArgs {
    std::string path;
    std::string metadata;
    std::string name;
    bool raw = false;
    bool not_frequency_sorted = false;

    void add_to(CLI::App& cmd, const std::string& flag, const std::string& what) {
        cmd.add_option(flag, path, "vector file (" + what + ")")->required();
    }
    EmbeddingSpace load() const {
        EmbeddingSpace space = load_space_file(path, name.empty() ? path : name);
        if (not_frequency_sorted) space = space.with_frequency_sorted(false);
        if (!raw) space = normalize(space);
        if (!metadata.empty()) {
            std::ifstream in(metadata);
            if (!in) throw Error(ErrorKind::IoError, "cannot open metadata '" + metadata + "'").about(metadata);
            AttachResult r = attach_metadata(space, load_metadata(in));
            space = r.space;
        }
        for (const auto& w : space.warnings()) std::cerr << "warning: " << w << '\n';
        return space;
    }
};

void add_space_flags(CLI::App& cmd, SpaceArgs& s) {
    cmd.add_option("--metadata", s.metadata, "tab-separated metadata file with a 'label' header column");
    cmd.add_option("--name", s.name, "space name (defaults to the file path)");
    cmd.add_flag("--raw,--no-normalize", s.raw, "keep vectors as loaded instead of normalizing");
    cmd.add_flag("--not-frequency-sorted", s.not_frequency_sorted, "file order is not a frequency ranking");
}

struct SelectionArgs {
    std::vector<std::string> items;
    std::string items_file;
    std::string filter;
    std::vector<std::string> label_sets;  // name=path

    void add_to(CLI::App& cmd) {
        cmd.add_option("--items", items, "comma-separated item labels")->delimiter(',');
        cmd.add_option("--items-file", items_file, "file with one item label per line");
        cmd.add_option("--filter", filter, "filter rule selecting items");
        cmd.add_option("--label-set", label_sets, "named label set for in(@name), as name=path (repeatable)");
    }

    NamedSets sets() const {
        NamedSets sets = default_named_sets();
        for (const auto& entry : label_sets) {
            const auto eq = entry.find('=');
            if (eq == std::string::npos || eq == 0) throw UsageError("--label-set expects name=path, got '" + entry + "'");
            auto labels = load_label_file(entry.substr(eq + 1));
            sets[entry.substr(0, eq)] = std::make_shared<const LabelSet>(labels.begin(), labels.end());
        }
        return sets;
    }

    std::vector<std::string> select(const EmbeddingSpace& space) const {
        std::vector<std::string> chosen = items;
        if (!items_file.empty()) {
            std::ifstream in(items_file);
            if (!in) throw Error(ErrorKind::IoError, "cannot open items file '" + items_file + "'").about(items_file);
            std::string line;
            while (std::getline(in, line)) {
                if (!line.empty() && line.back() == '\r') line.pop_back();
                if (!line.empty()) chosen.push_back(line);
            }
        }
        const bool explicit_items = !items.empty() || !items_file.empty();
        if (filter.empty()) return explicit_items ? chosen : space.labels();
        FilterResult result = apply_filter(space, parse_filter(filter, sets()));
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
        if (!explicit_items) return result.labels;
        const std::set<std::string> pass(result.labels.begin(), result.labels.end());
        std::vector<std::string> out;
        for (auto& c : chosen) {
            if (pass.contains(c)) out.push_back(std::move(c));
        }
        return out;
    }
};

struct OutputArgs {
    std::string format = "json";
    std::string path;

    void add_to(CLI::App& cmd, bool svg = true) {
        auto* opt = cmd.add_option("--out", format, "output format");
        opt->check(CLI::IsMember(svg ? std::vector<std::string>{"json", "csv", "svg"}
                                     : std::vector<std::string>{"json", "csv"}));
        opt->capture_default_str();
        cmd.add_option("-o,--output", path, "write to this file instead of standard output");
    }

    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            if (!text.empty() && text.back() != '\n') std::cout << '\n';
            return;
        }
        std::ofstream out(path);
        if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path + "'").about(path);
        out << text;
        if (!text.empty() && text.back() != '\n') out << '\n';
    }
};

std::vector<AxisSpec> make_axes(const std::vector<std::string>& formulae) {
    std::vector<AxisSpec> axes;
    for (const auto& f : formulae) axes.push_back(make_axis(f));
    return axes;
}

void require_axes(const std::vector<std::string>& axes, std::size_t lo, std::size_t hi, const char* command) {
    if (axes.size() < lo || axes.size() > hi) {
        std::string want = hi == lo ? std::to_string(lo)
                           : hi == SIZE_MAX ? "at least " + std::to_string(lo)
                                            : std::to_string(lo) + " or " + std::to_string(hi);
        throw UsageError(std::string(command) + " needs " + want + " --axis options, got " +
                         std::to_string(axes.size()));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vecaxis: project embedding spaces onto formula-defined axes"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "expand all help");

    // load-check
    auto* load_cmd = app.add_subcommand("load-check", "load a vector file and report its shape and warnings");
    std::string load_path;
    SpaceArgs load_space_args;
    load_cmd->add_option("file", load_path, "vector file")->required();
    add_space_flags(*load_cmd, load_space_args);

    // project
    auto* project_cmd = app.add_subcommand("project", "Cartesian projection onto 2 or 3 formula axes");
    SpaceArgs project_space;
    SelectionArgs project_sel;
    OutputArgs project_out;
    std::vector<std::string> project_axes;
    std::string project_measure = "cosine";
    bool project_analogy = false;
    double band_width = kDefaultBandWidth;
    project_space.add_to(*project_cmd, "--space", "space");
    add_space_flags(*project_cmd, project_space);
    project_cmd->add_option("--axis", project_axes, "axis formula (repeat 2 or 3 times)");
    project_cmd->add_option("--measure", project_measure, "cosine, dot or euclidean")->capture_default_str();
    project_cmd->add_flag("--analogy", project_analogy, "add the bisector and bands (2 axes only)");
    project_cmd->add_option("--band-width", band_width, "analogy band width")->capture_default_str();
    project_sel.add_to(*project_cmd);
    project_out.add_to(*project_cmd);

    // polar
    auto* polar_cmd = app.add_subcommand("polar", "polar projection onto 3 or more formula axes");
    SpaceArgs polar_space;
    SelectionArgs polar_sel;
    OutputArgs polar_out;
    std::vector<std::string> polar_axes;
    std::string polar_measure = "cosine";
    std::size_t polar_cap = kDefaultPolarItemCap;
    polar_space.add_to(*polar_cmd, "--space", "space");
    add_space_flags(*polar_cmd, polar_space);
    polar_cmd->add_option("--axis", polar_axes, "axis formula (repeat at least 3 times)");
    polar_cmd->add_option("--measure", polar_measure, "cosine, dot or euclidean")->capture_default_str();
    polar_cmd->add_option("--max-items", polar_cap, "item cap")->capture_default_str();
    polar_sel.add_to(*polar_cmd);
    polar_out.add_to(*polar_cmd);

    // compare
    auto* compare_cmd = app.add_subcommand("compare", "same axes and items in two spaces");
    SpaceArgs space_a;
    SpaceArgs space_b;
    SelectionArgs compare_sel;
    OutputArgs compare_out;
    std::vector<std::string> compare_axes;
    std::string compare_measure = "cosine";
    std::optional<double> min_length;
    space_a.add_to(*compare_cmd, "--space-a", "first space");
    space_b.add_to(*compare_cmd, "--space-b", "second space");
    compare_cmd->add_option("--name-a", space_a.name, "first space name");
    compare_cmd->add_option("--name-b", space_b.name, "second space name");
    compare_cmd->add_option("--metadata-a", space_a.metadata, "metadata for the first space");
    compare_cmd->add_flag("--raw-a", space_a.raw, "do not normalize the first space");
    compare_cmd->add_flag("--raw-b", space_b.raw, "do not normalize the second space");
    compare_cmd->add_option("--axis", compare_axes, "axis formula (repeat 2 or 3 times)");
    compare_cmd->add_option("--measure", compare_measure, "cosine, dot or euclidean")->capture_default_str();
    compare_cmd->add_option("--min-length", min_length, "keep segments strictly longer than this");
    compare_sel.add_to(*compare_cmd);
    compare_out.add_to(*compare_cmd);

    // pca
    auto* pca_cmd = app.add_subcommand("pca", "principal component view of the selected items");
    SpaceArgs pca_space;
    SelectionArgs pca_sel;
    OutputArgs pca_out;
    std::size_t pca_k = 2;
    pca_space.add_to(*pca_cmd, "--space", "space");
    add_space_flags(*pca_cmd, pca_space);
    pca_cmd->add_option("-k,--components", pca_k, "number of components")->capture_default_str();
    pca_sel.add_to(*pca_cmd);
    pca_out.add_to(*pca_cmd);

    // tsne
    auto* tsne_cmd = app.add_subcommand("tsne", "exact t-SNE view of the selected items");
    SpaceArgs tsne_space;
    SelectionArgs tsne_sel;
    OutputArgs tsne_out;
    TsneConfig tsne_config;
    bool tsne_progress = false;
    tsne_space.add_to(*tsne_cmd, "--space", "space");
    add_space_flags(*tsne_cmd, tsne_space);
    tsne_cmd->add_option("--perplexity", tsne_config.perplexity)->capture_default_str();
    tsne_cmd->add_option("--iterations", tsne_config.iterations)->capture_default_str();
    tsne_cmd->add_option("--learning-rate", tsne_config.learning_rate)->capture_default_str();
    tsne_cmd->add_option("--seed", tsne_config.seed)->capture_default_str();
    tsne_cmd->add_option("--kl-interval", tsne_config.kl_interval)->capture_default_str();
    tsne_cmd->add_flag("--progress", tsne_progress, "report progress on standard error");
    tsne_sel.add_to(*tsne_cmd);
    tsne_out.add_to(*tsne_cmd);

    // nearest
    auto* nearest_cmd = app.add_subcommand("nearest", "nearest labels to a formula");
    SpaceArgs nearest_space;
    OutputArgs nearest_out;
    std::string nearest_formula;
    std::size_t nearest_k = 10;
    std::string nearest_measure = "cosine";
    bool exclude_atoms = false;
    nearest_space.add_to(*nearest_cmd, "--space", "space");
    add_space_flags(*nearest_cmd, nearest_space);
    nearest_cmd->add_option("--formula", nearest_formula, "query formula")->required();
    nearest_cmd->add_option("-k", nearest_k, "number of neighbors")->capture_default_str();
    nearest_cmd->add_option("--measure", nearest_measure, "cosine, dot or euclidean")->capture_default_str();
    nearest_cmd->add_flag("--exclude-atoms", exclude_atoms, "drop the formula's own labels");
    nearest_out.add_to(*nearest_cmd, false);

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "run the HTTP/JSON service");
    std::string config_path;
    std::string listen_override;
    serve_cmd->add_option("--config", config_path, "server config (JSON)")->required();
    serve_cmd->add_option("--listen", listen_override, "host:port, overrides the config and VECAXIS_LISTEN");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "vecaxis: " << e.what() << "\nRun with --help for usage.\n";
        return kUsageExit;
    }

    try {
        if (*load_cmd) {
            load_space_args.path = load_path;
            EmbeddingSpace space = load_space_args.load();
            Json doc{{"name", space.name()},
                     {"dimension", space.dimension()},
                     {"size", space.size()},
                     {"normalized", space.normalized()},
                     {"has_metadata", space.has_metadata()},
                     {"warnings", space.warnings().size()}};
            std::cout << doc.dump(2) << '\n';
        } else if (*project_cmd) {
            require_axes(project_axes, 2, 3, "project");
            if (project_analogy && project_axes.size() != 2) throw UsageError("--analogy needs exactly 2 axes");
            const Measure measure = parse_measure(project_measure);
            auto axes = make_axes(project_axes);
            EmbeddingSpace space = project_space.load();
            auto projection = project_cartesian(space, std::move(axes), project_sel.select(space), measure);
            std::optional<AnalogyDecoration> analogy;
            if (project_analogy) analogy = decorate_analogy(projection, band_width);
            const AnalogyDecoration* deco = analogy ? &*analogy : nullptr;
            if (project_out.format == "csv") project_out.write(to_csv(projection));
            else if (project_out.format == "svg") project_out.write(render_svg(projection, deco));
            else project_out.write(to_json(projection, deco).dump(2));
        } else if (*polar_cmd) {
            require_axes(polar_axes, 3, SIZE_MAX, "polar");
            const Measure measure = parse_measure(polar_measure);
            auto axes = make_axes(polar_axes);
            EmbeddingSpace space = polar_space.load();
            auto projection = project_polar(space, std::move(axes), polar_sel.select(space), measure, polar_cap);
            if (polar_out.format == "csv") polar_out.write(to_csv(projection));
            else if (polar_out.format == "svg") polar_out.write(render_svg(projection));
            else polar_out.write(to_json(projection).dump(2));
        } else if (*compare_cmd) {
            require_axes(compare_axes, 2, 3, "compare");
            const Measure measure = parse_measure(compare_measure);
            auto axes = make_axes(compare_axes);
            EmbeddingSpace a = space_a.load();
            EmbeddingSpace b = space_b.load();
            ComparisonResult result = compare(a, b, std::move(axes), compare_sel.select(a), measure);
            for (const auto& d : result.dropped) {
                std::cerr << "dropped: " << d.label << " (missing from " << d.missing_from << ")\n";
            }
            if (min_length) result = filter_by_segment_length(result, *min_length);
            if (compare_out.format == "csv") compare_out.write(to_csv(result));
            else if (compare_out.format == "svg") compare_out.write(render_svg(result));
            else compare_out.write(to_json(result, min_length).dump(2));
        } else if (*pca_cmd) {
            EmbeddingSpace space = pca_space.load();
            PcaView view = project_pca_view(space, pca_sel.select(space), pca_k);
            if (pca_out.format == "csv") pca_out.write(to_csv(view.view));
            else if (pca_out.format == "svg") pca_out.write(render_svg(view.view));
            else pca_out.write(to_json(view).dump(2));
        } else if (*tsne_cmd) {
            EmbeddingSpace space = tsne_space.load();
            ProgressFn progress;
            if (tsne_progress) {
                progress = [](std::size_t it, std::size_t total) {
                    if (it % 50 == 0 || it == total) std::cerr << "iteration " << it << '/' << total << '\n';
                };
            }
            TsneView view = project_tsne_view(space, tsne_sel.select(space), tsne_config, {}, progress);
            if (tsne_out.format == "csv") tsne_out.write(to_csv(view.view));
            else if (tsne_out.format == "svg") tsne_out.write(render_svg(view.view));
            else tsne_out.write(to_json(view).dump(2));
        } else if (*nearest_cmd) {
            const Measure measure = parse_measure(nearest_measure);
            const Formula formula = parse_formula(nearest_formula);
            EmbeddingSpace space = nearest_space.load();
            const auto atoms = free_labels(formula);
            auto ranked = nearest(space, evaluate(formula, space), exclude_atoms ? nearest_k + atoms.size() : nearest_k,
                                  measure);
            if (exclude_atoms) {
                std::erase_if(ranked, [&](const Neighbor& n) { return atoms.contains(n.label); });
                if (ranked.size() > nearest_k) ranked.resize(nearest_k);
            }
            if (nearest_out.format == "csv") nearest_out.write(to_csv(ranked));
            else nearest_out.write(to_json(ranked).dump(2));
        } else if (*serve_cmd) {
            ServerConfig config = load_server_config(config_path);
            if (!listen_override.empty()) config.listen = listen_override;
            auto service = Service::from_config(config);
            HttpServer server(*service);
            std::cerr << "listening on " << config.listen << '\n';
            server.listen(config.listen);
        }
    } catch (const UsageError& e) {
        std::cerr << "vecaxis: " << e.what() << "\nRun with --help for usage.\n";
        return kUsageExit;
    } catch (const Error& e) {
        std::cerr << "vecaxis: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "vecaxis: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
