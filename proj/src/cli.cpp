#include "ordopt/cli.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ordopt/catalog.hpp"
#include "ordopt/cost_model.hpp"
#include "ordopt/error.hpp"
#include "ordopt/extsort.hpp"
#include "ordopt/favorable_orders.hpp"
#include "ordopt/json_util.hpp"
#include "ordopt/logical_expr.hpp"
#include "ordopt/optimizer.hpp"
#include "ordopt/oracle.hpp"
#include "ordopt/refinement.hpp"

namespace ordopt {

namespace {

struct Inputs {
  Catalog catalog;
  QuerySpec query;
  CostParams params;
};

Inputs load_inputs(const std::string& catalog_path, const std::string& query_path, const std::string& config_path) {
  Inputs in;
  in.catalog = Catalog::load(catalog_path);
  in.query = parse_query(json_util::read_file(query_path), in.catalog);
  if (!config_path.empty()) in.params = CostParams::load(config_path);
  in.params.validate();
  return in;
}

nlohmann::json refine_json(const RefineResult& r) {
  return {{"accepted", r.accepted},
          {"benefit_before", r.benefit_before},
          {"benefit_after", r.benefit_after},
          {"cost_before", r.cost_before},
          {"cost_after", r.cost_after}};
}

std::string refine_text(const RefineResult& r) {
  return fmt::format("refine: {} benefit {} -> {} cost {:.6f} -> {:.6f}\n", r.accepted ? "accepted" : "kept original",
                     r.benefit_before, r.benefit_after, r.cost_before, r.cost_after);
}

void print_plan(std::ostream& out, const Inputs& in, Heuristic h, const PlanPtr& plan,
                const std::optional<RefineResult>& refine, bool json) {
  if (json) {
    nlohmann::json doc = {{"heuristic", heuristic_name(h)},
                          {"total_cost", plan->total_cost},
                          {"plan", to_json(*plan, preorder(*in.query.root))},
                          {"inputs",
                           {{"catalog", in.catalog.to_json()},
                            {"query", serialize_query(in.query)},
                            {"cost_params", in.params.to_json()}}}};
    if (refine) doc["refine"] = refine_json(*refine);
    out << doc.dump(2) << '\n';
    return;
  }
  fmt::print(out, "heuristic: {}\n", heuristic_name(h));
  out << to_text(*plan);
  fmt::print(out, "total cost: {:.6f}\n", plan->total_cost);
  if (refine) out << refine_text(*refine);
}

std::string node_label(const LogicalExpr& e) {
  switch (e.kind()) {
    case ExprKind::scan: {
      const auto& s = e.as<ScanOp>();
      return s.alias == s.relation ? fmt::format("scan {}", s.relation)
                                   : fmt::format("scan {} as {}", s.relation, s.alias);
    }
    case ExprKind::select:
      return fmt::format("select sel={:g}", e.as<SelectOp>().selectivity);
    case ExprKind::project:
      return fmt::format("project {}", to_string(e.as<ProjectOp>().cols));
    case ExprKind::join:
      return fmt::format("{}join on {}", e.as<JoinOp>().full_outer ? "full outer " : "",
                         to_string(e.as<JoinOp>().join_attrs));
    case ExprKind::group_by:
      return fmt::format("groupby {}", to_string(e.as<GroupByOp>().keys));
  }
  return "?";
}

void explain_afm(std::ostream& out, FavorableOrders& fav, const LogicalExpr& e, int depth) {
  const FavorableOrderSet& set = fav.afm(e);
  fmt::print(out, "{:{}}{} [{} orders{}]\n", "", depth * 2, node_label(e), set.size(),
             set.size() > kLargeFavorableSet ? ", large" : "");
  for (const auto& o : set.sorted()) {
    std::string line;
    for (std::size_t i = 0; i < o.size(); ++i) line += (i ? "," : "") + o[i];
    fmt::print(out, "{:{}}- {}\n", "", depth * 2 + 2, line);
  }
  for (const auto& c : e.inputs()) explain_afm(out, fav, *c, depth + 1);
}

struct SortRun {
  SortMetrics metrics;
  std::int64_t rows_out = 0;
  bool sorted = true;
};

SortRun run_sort(std::int64_t rows, std::int64_t segment_rows, std::size_t keys, std::int64_t payload,
                 const SortSpec& spec, bool mrs, std::uint64_t seed) {
  auto input = gen_segmented_input(rows, segment_rows, keys, payload, seed);
  auto stream = mrs ? sort_mrs(std::move(input), spec) : sort_srs(std::move(input), spec);
  SortRun r;
  std::optional<Tuple> prev;
  while (auto t = stream->next()) {
    ++r.rows_out;
    if (prev && std::lexicographical_compare(t->keys.begin(), t->keys.begin() + spec.target_order_len,
                                             prev->keys.begin(), prev->keys.begin() + spec.target_order_len)) {
      r.sorted = false;
    }
    prev = std::move(t);
  }
  r.metrics = stream->metrics();
  return r;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sort-order aware query optimization and external sorting", "ordopt"};
  app.require_subcommand(1);

  std::string catalog_path;
  std::string query_path;
  std::string config_path;
  std::string heuristic = "favorable";
  bool refine = false;
  bool json = false;

  auto* opt_cmd = app.add_subcommand("optimize", "Find the cheapest plan for a query");
  opt_cmd->add_option("--catalog", catalog_path, "Catalog JSON")->required()->check(CLI::ExistingFile);
  opt_cmd->add_option("--query", query_path, "Query JSON")->required()->check(CLI::ExistingFile);
  opt_cmd->add_option("--config", config_path, "Cost parameter JSON")->check(CLI::ExistingFile);
  opt_cmd->add_option("--heuristic", heuristic, "arbitrary, postgres, favorable or exhaustive")
      ->check(CLI::IsMember({"arbitrary", "postgres", "favorable", "exhaustive"}));
  opt_cmd->add_flag("--refine", refine, "Rework merge-join orders after the search");
  opt_cmd->add_flag("--json", json, "Emit JSON");

  std::string plan_path;
  auto* refine_cmd = app.add_subcommand("refine", "Rework the merge-join orders of a saved plan");
  refine_cmd->add_option("--plan", plan_path, "Output of optimize --json")->required()->check(CLI::ExistingFile);
  refine_cmd->add_flag("--json", json, "Emit JSON");

  auto* afm_cmd = app.add_subcommand("explain-afm", "Print the favorable orders of every node");
  afm_cmd->add_option("--catalog", catalog_path, "Catalog JSON")->required()->check(CLI::ExistingFile);
  afm_cmd->add_option("--query", query_path, "Query JSON")->required()->check(CLI::ExistingFile);

  std::int64_t rows = 100000;
  std::int64_t segment_rows = 1000;
  std::size_t keys = 3;
  std::size_t target_len = 0;
  std::size_t known_prefix = 1;
  std::int64_t payload = 200;
  std::int64_t mem_blocks = 64;
  std::int64_t block_bytes = 4096;
  std::string algo = "mrs";
  std::uint64_t seed = 1;

  auto* sort_cmd = app.add_subcommand("sort", "Sort a generated segmented stream");
  sort_cmd->add_option("--rows", rows, "Input rows")->check(CLI::NonNegativeNumber);
  sort_cmd->add_option("--segment-rows", segment_rows, "Rows per prefix segment")->check(CLI::PositiveNumber);
  sort_cmd->add_option("--keys", keys, "Key positions per tuple")->check(CLI::PositiveNumber);
  sort_cmd->add_option("--target-len", target_len, "Sort order length (default: all keys)");
  sort_cmd->add_option("--known-prefix", known_prefix, "Key positions the input is grouped on (mrs)");
  sort_cmd->add_option("--payload", payload, "Bytes per tuple")->check(CLI::PositiveNumber);
  sort_cmd->add_option("--mem-blocks", mem_blocks, "Memory in blocks")->check(CLI::PositiveNumber);
  sort_cmd->add_option("--block-bytes", block_bytes, "Bytes per block")->check(CLI::PositiveNumber);
  sort_cmd->add_option("--algo", algo, "srs or mrs")->check(CLI::IsMember({"srs", "mrs"}));
  sort_cmd->add_option("--seed", seed, "Generator seed");
  sort_cmd->add_flag("--json", json, "Emit JSON");

  auto* bench_cmd = app.add_subcommand("bench", "Experiment drivers");
  bench_cmd->require_subcommand(1);
  bool csv = false;
  auto* a3_cmd = bench_cmd->add_subcommand("a3", "Run writes of SRS and MRS as segments grow");
  a3_cmd->add_option("--rows", rows, "Input rows")->check(CLI::PositiveNumber);
  a3_cmd->add_option("--keys", keys, "Key positions per tuple")->check(CLI::Range(2, 64));
  a3_cmd->add_option("--payload", payload, "Bytes per tuple")->check(CLI::PositiveNumber);
  a3_cmd->add_option("--mem-blocks", mem_blocks, "Memory in blocks")->check(CLI::PositiveNumber);
  a3_cmd->add_option("--block-bytes", block_bytes, "Bytes per block")->check(CLI::PositiveNumber);
  a3_cmd->add_option("--seed", seed, "Generator seed");
  auto* a3_json = a3_cmd->add_flag("--json", json, "Emit JSON");
  a3_cmd->add_flag("--csv", csv, "Emit CSV (default)")->excludes(a3_json);

  bool with_brute = false;
  auto* b3_cmd = bench_cmd->add_subcommand("b3", "Plan cost under each heuristic");
  b3_cmd->add_option("--catalog", catalog_path, "Catalog JSON")->required()->check(CLI::ExistingFile);
  b3_cmd->add_option("--query", query_path, "Query JSON")->required()->check(CLI::ExistingFile);
  b3_cmd->add_option("--config", config_path, "Cost parameter JSON")->check(CLI::ExistingFile);
  b3_cmd->add_flag("--brute", with_brute, "Add the exhaustive reference cost");
  auto* b3_json = b3_cmd->add_flag("--json", json, "Emit JSON");
  b3_cmd->add_flag("--csv", csv, "Emit CSV (default)")->excludes(b3_json);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (opt_cmd->parsed()) {
      const Inputs in = load_inputs(catalog_path, query_path, config_path);
      const Heuristic h = parse_heuristic(heuristic);
      const QueryPlan qp = plan_query(in.catalog, in.params, in.query, h, refine);
      print_plan(out, in, h, qp.plan, qp.refine, json);
    } else if (refine_cmd->parsed()) {
      const nlohmann::json doc = json_util::read_file(plan_path);
      json_util::require_object(doc, "$");
      const auto& inputs = json_util::required(doc, "$", "inputs");
      json_util::require_object(inputs, "$.inputs");
      Inputs in;
      in.catalog = Catalog::from_json(json_util::required(inputs, "$.inputs", "catalog"));
      in.query = parse_query(json_util::required(inputs, "$.inputs", "query"), in.catalog);
      in.params = CostParams::from_json(json_util::required(inputs, "$.inputs", "cost_params"));
      in.params.validate();
      const Heuristic h = parse_heuristic(json_util::get_string(doc, "$", "heuristic"));
      const PlanPtr plan = plan_from_json(json_util::required(doc, "$", "plan"), preorder(*in.query.root), "$.plan");
      Optimizer opt(in.catalog, in.params, referenced_attributes(in.query), h);
      const RefineResult r = refine_plan(plan, *in.query.root, in.query.required_output_order, opt);
      print_plan(out, in, h, r.plan, r, json);
    } else if (afm_cmd->parsed()) {
      const Inputs in = load_inputs(catalog_path, query_path, "");
      FavorableOrders fav(in.catalog, referenced_attributes(in.query));
      explain_afm(out, fav, *in.query.root, 0);
    } else if (sort_cmd->parsed()) {
      SortSpec spec;
      spec.target_order_len = target_len == 0 ? keys : target_len;
      spec.known_prefix_len = algo == "mrs" ? known_prefix : 0;
      spec.cfg = {block_bytes, mem_blocks};
      if (spec.target_order_len > keys) throw ConfigError("--target-len exceeds --keys");
      spec.validate();
      const SortRun r = run_sort(rows, segment_rows, keys, payload, spec, algo == "mrs", seed);
      nlohmann::json doc = r.metrics.to_json();
      doc["algo"] = algo;
      doc["rows_out"] = r.rows_out;
      doc["sorted"] = r.sorted;
      if (json) {
        out << doc.dump(2) << '\n';
      } else {
        for (const auto& [k, v] : doc.items()) {
          out << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
        }
      }
    } else if (a3_cmd->parsed()) {
      SortSpec spec;
      spec.target_order_len = keys;
      spec.known_prefix_len = 1;
      spec.cfg = {block_bytes, mem_blocks};
      spec.validate();
      nlohmann::json rows_json = nlohmann::json::array();
      if (!json) {
        out << "segment_rows,srs_run_blocks_written,mrs_run_blocks_written,srs_comparisons,mrs_comparisons,"
               "srs_tuples_before_first_out,mrs_tuples_before_first_out\n";
      }
      for (std::int64_t seg = 1; seg <= rows; seg *= 10) {
        const SortRun s = run_sort(rows, seg, keys, payload, spec, false, seed);
        const SortRun m = run_sort(rows, seg, keys, payload, spec, true, seed);
        if (json) {
          rows_json.push_back({{"segment_rows", seg}, {"srs", s.metrics.to_json()}, {"mrs", m.metrics.to_json()}});
        } else {
          fmt::print(out, "{},{},{},{},{},{},{}\n", seg, s.metrics.run_blocks_written, m.metrics.run_blocks_written,
                     s.metrics.comparisons, m.metrics.comparisons, s.metrics.tuples_in_before_first_out,
                     m.metrics.tuples_in_before_first_out);
        }
      }
      if (json) out << rows_json.dump(2) << '\n';
    } else if (b3_cmd->parsed()) {
      const Inputs in = load_inputs(catalog_path, query_path, config_path);
      const double base = plan_query(in.catalog, in.params, in.query, Heuristic::exhaustive, false).plan->total_cost;
      std::vector<std::pair<std::string, double>> costs;
      for (Heuristic h : {Heuristic::exhaustive, Heuristic::favorable, Heuristic::postgres, Heuristic::arbitrary}) {
        costs.emplace_back(heuristic_name(h), plan_query(in.catalog, in.params, in.query, h, false).plan->total_cost);
      }
      costs.emplace_back("favorable+refine",
                         plan_query(in.catalog, in.params, in.query, Heuristic::favorable, true).plan->total_cost);
      if (with_brute) costs.emplace_back("brute", brute_best_plan(in.catalog, in.params, in.query, OracleGuard::from_env()));
      if (json) {
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& [name, c] : costs) doc.push_back({{"heuristic", name}, {"cost", c}, {"normalized", 100 * c / base}});
        out << doc.dump(2) << '\n';
      } else {
        out << "heuristic,cost,normalized\n";
        for (const auto& [name, c] : costs) fmt::print(out, "{},{:.6f},{:.3f}\n", name, c, 100 * c / base);
      }
    }
  } catch (const TooLarge& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitTooLarge;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInvalid;
  }
  return kExitOk;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace ordopt
