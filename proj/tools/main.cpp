// crsing command-line front end.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "crsing/errors.hpp"
#include "crsing/report.hpp"

namespace {

struct Options {
  std::string input;
  std::optional<int> trunc;
  std::optional<int> order;
  std::optional<double> oracle;
  std::string out;
  bool json = false;
};

int emit(const crs::RunOutcome& r, const Options& o) {
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write " << o.out << "\n";
      return crs::kExitValidation;
    }
    f << r.json;
  }
  std::cout << (o.json ? r.json : r.summary);
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariants, map identities and singular ODE solves for truncated CR hypersurfaces"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* sub, bool with_input) {
    if (with_input) sub->add_option("input", o.input, "input file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "write the JSON report to this path");
    sub->add_flag("--json", o.json, "print the JSON report instead of the summary");
  };
  auto* report = app.add_subcommand("report", "invariants of a hypersurface file");
  common(report, true);
  report->add_option("--trunc", o.trunc, "override the truncation order")->check(CLI::PositiveNumber);
  auto* check_map = app.add_subcommand("check-map", "residuals of the frame identities for a map file");
  common(check_map, true);
  check_map->add_option("--trunc", o.trunc, "override the truncation order")->check(CLI::PositiveNumber);
  auto* bb = app.add_subcommand("bb-solve", "formal solution of a Briot-Bouquet system");
  common(bb, true);
  bb->add_option("--trunc", o.trunc, "override the truncation order")->check(CLI::PositiveNumber);
  bb->add_option("--order", o.order, "solve through this power of t")->check(CLI::PositiveNumber);
  bb->add_option("--oracle", o.oracle, "compare with numeric integration started at +-t0");
  auto* prolong = app.add_subcommand("prolong", "assemble and solve a prolonged jet system");
  common(prolong, true);
  prolong->add_option("--trunc", o.trunc, "override the closure truncation order")->check(CLI::PositiveNumber);
  prolong->add_option("--order", o.order, "solve through this power of s")->check(CLI::PositiveNumber);
  auto* examples = app.add_subcommand("examples", "run the built-in corpus");
  common(examples, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : crs::kExitParse;
  }

  try {
    if (*examples) return emit(crs::run_examples(), o);
    const std::string text = crs::read_text_file(o.input);
    if (*report) return emit(crs::report_hypersurface(crs::parse_hypersurface_spec(text, o.trunc)), o);
    if (*check_map) {
      const auto dir = std::filesystem::path(o.input).parent_path();
      return emit(crs::report_map(crs::parse_map_spec(text, dir, o.trunc)), o);
    }
    if (*bb) return emit(crs::report_bb(crs::parse_bb_system(text, o.trunc, o.order), o.oracle), o);
    return emit(crs::report_prolongation(crs::parse_prolonged_system(text, o.trunc, o.order)), o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return crs::exit_code_for(e);
  }
}
