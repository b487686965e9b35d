#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace horolab {

// Every field has a default; defaults_for() adjusts a few per subcommand.
//   seed            Monte-Carlo seed                                  (7)
//   n               Monte-Carlo sample count                          (1000000 mixing, 100000 trace-decay)
//   n_b             boundary nodes, power of two                      (64 plancherel, 256 quantize-check)
//   n_r             spectral nodes, multiple of panel_order           (256 plancherel, 96 quantize-check)
//   panel_order     Gauss nodes per spectral panel                    (8)
//   r_max           spectral cutoff                                   (12)
//   support_radius  disk quadrature ball radius                       (3)
//   n_rho, n_phi    disk grid                                         (64/32, 128)
//   ball_length     word length of the Poincare-series ball           (1)
//   t_min, t_max, t_step   time grid                                  (0, 8, 0.5; trace-decay 0, 6, 0.5)
//   fit_t0, fit_t1  decay-fit window                                  (1, 8; trace-decay 1, 6)
//   records         number of synthetic eigen-records                 (8)
//   n_theta         K-integral nodes                                  (256)
//   eigendata       eigen-data document to ingest instead of synthetic records ("")
//   out             output directory                                  ("horolab_out")
//   force           overwrite existing outputs                        (false)
struct ExperimentConfig {
    std::string subcommand;
    std::uint64_t seed = 7;
    long n = 1000000;
    int n_b = 64;
    int n_r = 256;
    int panel_order = 8;
    double r_max = 12.0;
    double support_radius = 3.0;
    int n_rho = 64;
    int n_phi = 128;
    int ball_length = 1;
    double t_min = 0.0;
    double t_max = 8.0;
    double t_step = 0.5;
    double fit_t0 = 1.0;
    double fit_t1 = 8.0;
    int records = 8;
    int n_theta = 256;
    std::string eigendata;
    std::string out = "horolab_out";
    bool force = false;

    std::vector<double> times() const;
};

const std::vector<std::string>& subcommand_names();

ExperimentConfig defaults_for(const std::string& subcommand);

// "key = value" lines, '#' starts a comment. Values overlay `base`.
// Unknown keys and unparsable values are collected and thrown together as ConfigError.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});

// Single assignment, used for command-line overrides.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

void validate_config(const ExperimentConfig& cfg);

}  // namespace horolab
