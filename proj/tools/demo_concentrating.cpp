// Writes a self-similar concentrating trajectory for the synthesize/analyze pipeline.
#include <CLI11.hpp>

#include "cascade_lab/pipeline.hpp"

int main(int argc, char** argv) {
  cascade_lab::cascade::ConcentratingProfile p;
  std::string out;
  CLI::App app{"Concentrating cascade trajectory"};
  app.add_option("--alpha", p.alpha, "dissipation exponent of the scaling law")->default_val(p.alpha);
  app.add_option("--lambda", p.lambda, "shell ratio")->default_val(p.lambda);
  app.add_option("--n-min", p.shells.first, "first shell")->default_val(p.shells.first);
  app.add_option("--n-max", p.shells.last, "last shell")->default_val(p.shells.last);
  app.add_option("--width", p.width, "pulse width in shells")->default_val(p.width);
  app.add_option("--samples", p.samples, "number of samples")->default_val(p.samples);
  app.add_option("--out", out, "trajectory CSV path")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cascade_lab::pipeline::kInput;
  }
  return cascade_lab::pipeline::run_concentrating(p, out);
}
