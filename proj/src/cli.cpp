#include "cyberbond/cli.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "cyberbond/errors.hpp"
#include "cyberbond/events.hpp"
#include "cyberbond/gof.hpp"
#include "cyberbond/kernels.hpp"

namespace cyberbond::cli {
namespace fs = std::filesystem;

namespace {

const std::vector<Family> kIntervalFamilies = {Family::Exponential, Family::Weibull, Family::Gamma,
                                               Family::ChiSquare, Family::Fisher};
// Per-category groups swap the central Fisher for the noncentral one.
const std::vector<Family> kCategoryFamilies = {Family::Exponential, Family::Weibull, Family::Gamma,
                                               Family::ChiSquare, Family::NoncentralFisher};
const std::vector<Family> kLossFamilies = {Family::LogNormal, Family::Weibull, Family::Gamma};

// ---- config parsing -------------------------------------------------------

const Json* find(const Json& j, const char* key) {
  if (!j.is_object()) return nullptr;
  const auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

double get_number(const Json& j, const char* key, const std::string& where) {
  const Json* v = find(j, key);
  if (!v || !v->is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v->get<double>();
}

double number_or(const Json& j, const char* key, double fallback, const std::string& where) {
  return find(j, key) ? get_number(j, key, where) : fallback;
}

// Missing, null, "inf" or "none" mean no trigger.
double get_trigger(const Json& j, const char* key) {
  const Json* v = find(j, key);
  if (!v) return kNoTrigger;
  if (v->is_string()) {
    const auto s = v->get<std::string>();
    if (s == "inf" || s == "none") return kNoTrigger;
    throw ConfigError(std::string("bond.") + key + " must be a number, null or \"inf\"");
  }
  if (!v->is_number()) throw ConfigError(std::string("bond.") + key + " must be a number");
  return v->get<double>();
}

std::vector<Family> get_families(const Json& j, const char* key, std::vector<Family> fallback) {
  const Json* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_array() || v->empty()) throw ConfigError(std::string("fit.") + key + " must be a non-empty array");
  std::vector<Family> out;
  for (const auto& f : *v) {
    if (!f.is_string()) throw ConfigError(std::string("fit.") + key + " entries must be strings");
    out.push_back(parse_family(f.get<std::string>()));
  }
  return out;
}

BondTerms parse_bond(const Json& j) {
  BondTerms b;
  b.notional = get_number(j, "notional", "bond");
  if (const Json* days = find(j, "coupon_days")) {
    if (!days->is_array() || days->empty()) throw ConfigError("bond.coupon_days must be a non-empty array");
    for (const auto& d : *days) {
      if (!d.is_number_integer()) throw ConfigError("bond.coupon_days must hold integers");
      b.coupon_days.push_back(d.get<std::int64_t>());
    }
  } else {
    const double years = get_number(j, "years", "bond");
    const double ppy = number_or(j, "payments_per_year", 2.0, "bond");
    if (years != std::floor(years) || ppy != std::floor(ppy)) {
      throw ConfigError("bond.years and bond.payments_per_year must be integers");
    }
    b.coupon_days = periodic_schedule(static_cast<int>(years), static_cast<int>(ppy));
  }
  b.maturity_days = b.coupon_days.back();
  b.funding_rate = get_number(j, "funding_rate", "bond");
  if (find(j, "coupon") && find(j, "coupon_rate_pct")) {
    throw ConfigError("bond: give either coupon or coupon_rate_pct, not both");
  }
  b.coupon = find(j, "coupon_rate_pct") ? b.notional * get_number(j, "coupon_rate_pct", "bond") / 100.0
                                        : number_or(j, "coupon", 0.0, "bond");
  b.coupon_trigger = get_trigger(j, "coupon_trigger");
  b.notional_trigger = get_trigger(j, "notional_trigger");
  b.validate();
  return b;
}

Stress parse_stress(const Json& j) {
  Stress s;
  s.label = j.value("label", std::string("stress"));
  const auto target = j.value("target", std::string());
  if (target == "frequency") {
    s.severity = false;
  } else if (target == "severity") {
    s.severity = true;
  } else {
    throw ConfigError("stress target must be 'frequency' or 'severity'");
  }
  s.param = static_cast<std::size_t>(number_or(j, "param", 0.0, "stress"));
  s.factor = get_number(j, "factor", "stress");
  return s;
}

std::string param_label(const SimulationConfig& model, std::size_t i) {
  const std::size_t nf = model.frequency.size();
  return i < nf ? "frequency." + std::string(param_names(model.frequency.family())[i])
                : "severity." + std::string(param_names(model.severity.family())[i - nf]);
}

std::vector<double> model_params(const SimulationConfig& model) {
  std::vector<double> p(model.frequency.params().begin(), model.frequency.params().end());
  p.insert(p.end(), model.severity.params().begin(), model.severity.params().end());
  return p;
}

// ---- output ---------------------------------------------------------------

OutputHeader header_for(const RunConfig& config, const char* command) {
  return {command, config.hash, config.seed};
}

std::ofstream open_output(const RunConfig& config, const std::string& name) {
  fs::create_directories(config.out_dir);
  std::ofstream f(config.out_dir / name, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write " + (config.out_dir / name).string());
  return f;
}

void write_json(const RunConfig& config, const std::string& name, const char* command,
                const Json& body, std::ostream& out) {
  auto f = open_output(config, name);
  f << with_header(header_for(config, command), body).dump(2) << '\n';
  out << "wrote " << (config.out_dir / name).string() << '\n';
}

Json number_json(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

const SimulationConfig& require_model(const RunConfig& c) {
  if (!c.model) throw ConfigError("config has no 'model' section");
  return *c.model;
}

const BondTerms& require_bond(const RunConfig& c) {
  if (!c.bond) throw ConfigError("config has no 'bond' section");
  return *c.bond;
}

SimulationConfig stressed(const SimulationConfig& model, const Stress& s) {
  SimulationConfig c = model;
  auto& spec = s.severity ? c.severity : c.frequency;
  if (s.param >= spec.size()) throw ConfigError("stress '" + s.label + "' names a missing parameter");
  spec = spec.with_param(s.param, spec.param(s.param) * s.factor);
  return c;
}

struct Grids {
  std::vector<double> coupon;
  std::vector<double> notional;
};

Grids make_grids(const ScenarioSet& scenarios, const TriggerGrid& g) {
  const auto losses = scenarios.final_losses();
  return {quantile_trigger_grid(losses, g.coupon_low, g.coupon_high, g.points),
          quantile_trigger_grid(losses, g.notional_low, g.notional_high, g.points)};
}

double average(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// ---- fit ------------------------------------------------------------------

struct FitRow {
  Family family;
  std::optional<FitResult> fit;
  std::vector<GofReport> gof;
  std::string error;
};

std::vector<FitRow> fit_series(const std::vector<double>& data, const std::vector<Family>& families,
                               Optimizer optimizer) {
  std::vector<FitRow> rows;
  for (const auto family : families) {
    FitRow row{family, std::nullopt, {}, {}};
    try {
      row.fit = fit_mle(family, data, optimizer);
      const auto& spec = row.fit->spec;
      const std::size_t k = param_count(family);
      const auto bins = std::max(default_chi_square_bins(data.size()), k + 2);
      row.gof.push_back(chi_square_test(data, spec, bins, k));
      row.gof.push_back(ks_test(data, spec));
      row.gof.push_back(cvm_test(data, spec));
    } catch (const InvalidArgument& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Json fit_rows_json(const std::vector<FitRow>& rows) {
  Json fits = Json::array();
  for (const auto& r : rows) {
    Json j;
    if (r.fit) {
      j = to_json(*r.fit);
      Json gof = Json::array();
      for (const auto& g : r.gof) gof.push_back(to_json(g));
      j["gof"] = gof;
    } else {
      j = {{"family", std::string(family_name(r.family))}, {"error", r.error}};
    }
    fits.push_back(j);
  }
  return fits;
}

void write_gof_table(const RunConfig& config, const std::string& name,
                     const std::vector<FitRow>& rows, std::ostream& out) {
  auto f = open_output(config, name);
  write_csv_header(f, header_for(config, "fit"));
  f << "family,params,standard_errors,log_likelihood,converged,chi_square,chi_square_df,"
       "chi_square_p,ks,ks_p,cvm,cvm_p\n";
  for (const auto& r : rows) {
    f << family_name(r.family) << ',';
    if (!r.fit) {
      f << ",,,false,,,,,,,\n";
      continue;
    }
    const auto names = param_names(r.family);
    for (std::size_t i = 0; i < r.fit->spec.size(); ++i) {
      f << (i ? " " : "") << names[i] << '=' << format_double(r.fit->spec.param(i));
    }
    f << ',';
    for (std::size_t i = 0; i < r.fit->standard_errors.size(); ++i) {
      f << (i ? " " : "") << names[i] << '=' << format_double(r.fit->standard_errors[i]);
    }
    f << ',' << format_double(r.fit->log_likelihood) << ',' << (r.fit->converged ? "true" : "false");
    for (const auto& g : r.gof) {
      f << ',' << format_double(g.statistic);
      if (g.test == GofTest::ChiSquare) f << ',' << g.df.value_or(0);
      f << ',' << format_double(g.p_value);
    }
    f << '\n';
  }
  out << "wrote " << (config.out_dir / name).string() << '\n';
}

bool all_converged(const std::vector<FitRow>& rows, const char* what, std::ostream& err) {
  bool ok = true;
  for (const auto& r : rows) {
    if (!r.fit) {
      err << "warning: " << what << " fit of " << family_name(r.family) << " skipped: " << r.error << '\n';
    } else if (!r.fit->converged) {
      err << "error: " << what << " fit of " << family_name(r.family)
          << " did not converge: " << r.fit->message << '\n';
      ok = false;
    }
  }
  return ok;
}

// ---- price helpers ----------------------------------------------------------

void write_survival(const RunConfig& config, const std::string& name, const SurvivalCurve& curve,
                    std::ostream& out) {
  auto f = open_output(config, name);
  write_csv_header(f, header_for(config, "price"));
  f << "trigger";
  for (const auto d : curve.payment_days) f << ",day_" << d;
  f << '\n';
  for (std::size_t t = 0; t < curve.triggers.size(); ++t) {
    f << format_double(curve.triggers[t]);
    for (std::size_t j = 0; j < curve.payment_days.size(); ++j) f << ',' << format_double(curve.at(t, j));
    f << '\n';
  }
  out << "wrote " << (config.out_dir / name).string() << '\n';
}

Json box_json_for(const RunConfig& config) {
  return config.box ? to_json(*config.box) : Json(nullptr);
}

}  // namespace

// ---- config ---------------------------------------------------------------

RunConfig parse_config(Json doc, const fs::path& base_dir, const Overrides& ov) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  // Flags override config fields; the hash covers the effective document.
  if (ov.seed) doc["seed"] = *ov.seed;
  if (ov.out_dir) doc["output_dir"] = ov.out_dir->string();
  if (ov.paths) doc["model"]["paths"] = *ov.paths;
  if (ov.category) doc["fit"]["category"] = *ov.category;
  if (ov.method) doc["coupon"]["method"] = *ov.method;

  RunConfig c;
  const Json* seed = find(doc, "seed");
  if (!seed) throw ConfigError("config must set 'seed' (or pass --seed)");
  if (!seed->is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
  c.seed = seed->get<std::uint64_t>();
  {
    // Where results go does not change them, so the destination is not hashed.
    Json hashed = doc;
    hashed.erase("output_dir");
    c.hash = fnv1a_hex(hashed.dump());
  }

  const auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  c.out_dir = find(doc, "output_dir") ? resolve(doc["output_dir"].get<std::string>()) : fs::path(".");

  if (const Json* events = find(doc, "events_csv")) {
    if (!events->is_string()) throw ConfigError("events_csv must be a path string");
    c.events_csv = resolve(events->get<std::string>());
    if (!fs::exists(*c.events_csv)) {
      throw ConfigError("events_csv does not exist: " + c.events_csv->string());
    }
  }

  const Json fit = doc.value("fit", Json::object());
  if (const Json* cat = find(fit, "category")) c.category = cat->get<std::string>();
  c.interval_families = get_families(fit, "interval_families",
                                     c.category ? kCategoryFamilies : kIntervalFamilies);
  c.loss_families = get_families(fit, "loss_families", kLossFamilies);
  if (const Json* opt = find(fit, "optimizer")) c.optimizer = parse_optimizer(opt->get<std::string>());

  if (const Json* bond = find(doc, "bond")) c.bond = parse_bond(*bond);

  if (const Json* model = find(doc, "model")) {
    const double paths = get_number(*model, "paths", "model");
    if (paths < 1 || paths != std::floor(paths)) throw ConfigError("model.paths must be a positive integer");
    const Json* freq = find(*model, "frequency");
    const Json* sev = find(*model, "severity");
    if (!freq || !sev) throw ConfigError("model needs 'frequency' and 'severity'");
    const double fallback = c.bond ? static_cast<double>(c.bond->maturity_days) : 0.0;
    SimulationConfig m{static_cast<std::int64_t>(number_or(*model, "horizon_days", fallback, "model")),
                       static_cast<std::size_t>(paths), c.seed, distribution_from_json(*freq),
                       distribution_from_json(*sev)};
    m.validate();
    if (c.bond && m.horizon_days < c.bond->maturity_days) {
      throw ConfigError("model.horizon_days is shorter than the bond maturity");
    }
    c.model = m;
  }

  if (const Json* grid = find(doc, "grid")) {
    const double points = number_or(*grid, "points", 20.0, "grid");
    if (points < 1 || points != std::floor(points)) throw ConfigError("grid.points must be a positive integer");
    c.grid.points = static_cast<std::size_t>(points);
    auto pair = [&](const char* key, double& lo, double& hi) {
      if (const Json* q = find(*grid, key)) {
        if (!q->is_array() || q->size() != 2) throw ConfigError(std::string("grid.") + key + " must be [low, high]");
        lo = (*q)[0].get<double>();
        hi = (*q)[1].get<double>();
      }
      if (!(lo > 0.0 && lo <= hi && hi < 1.0)) {
        throw ConfigError(std::string("grid.") + key + " must satisfy 0 < low <= high < 1");
      }
    };
    pair("coupon_quantiles", c.grid.coupon_low, c.grid.coupon_high);
    pair("notional_quantiles", c.grid.notional_low, c.grid.notional_high);
  }

  if (const Json* coupon = find(doc, "coupon")) {
    if (const Json* m = find(*coupon, "method")) c.coupon_method = parse_coupon_method(m->get<std::string>());
    c.reference_rate_pct = number_or(*coupon, "reference_rate_pct", c.reference_rate_pct, "coupon");
    c.pnl_pct = number_or(*coupon, "pnl_pct", c.pnl_pct, "coupon");
    c.constant_pct = number_or(*coupon, "constant_pct", c.constant_pct, "coupon");
    c.multiplier = number_or(*coupon, "multiplier", c.multiplier, "coupon");
    if (find(*coupon, "pl_pct")) c.pl_pct = get_number(*coupon, "pl_pct", "coupon");
    if (const Json* st = find(*coupon, "stress")) {
      if (!st->is_array()) throw ConfigError("coupon.stress must be an array");
      for (const auto& s : *st) c.stresses.push_back(parse_stress(s));
    }
  }

  if (const Json* g = find(doc, "greeks")) {
    if (const Json* b = find(*g, "bumps")) {
      GreekBumps bumps;
      bumps.lambda = get_number(*b, "lambda", "greeks.bumps");
      bumps.mu = get_number(*b, "mu", "greeks.bumps");
      bumps.sigma = get_number(*b, "sigma", "greeks.bumps");
      bumps.rate = get_number(*b, "rate", "greeks.bumps");
      c.bumps = bumps;
    }
    if (const Json* corners = find(*g, "corners")) c.greeks_corners = corners->get<bool>();
  }

  if (const Json* box = find(doc, "box")) {
    if (!c.model) throw ConfigError("'box' needs a 'model' section");
    const auto estimates = model_params(*c.model);
    const Json* se = find(*box, "standard_errors");
    if (!se || !se->is_array() || se->size() != estimates.size()) {
      throw ConfigError("box.standard_errors must list one value per model parameter");
    }
    std::vector<std::string> names;
    std::vector<double> ses;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
      names.push_back(param_label(*c.model, i));
      ses.push_back((*se)[i].get<double>());
    }
    c.box = ConfidenceBox::from_estimates(names, estimates, ses, get_number(*box, "level", "box"));
  }
  if (const Json* prudent = find(doc, "prudent")) {
    if (!c.box) throw ConfigError("'prudent' needs a 'box' section");
    c.prudent = parse_prudent_mode(prudent->get<std::string>());
  }

  c.document = std::move(doc);
  return c;
}

RunConfig load_config(const fs::path& path, const Overrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(std::move(doc), path.parent_path(), overrides);
}

// ---- commands ---------------------------------------------------------------

int cmd_fit(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (!config.events_csv) throw ConfigError("fit needs 'events_csv'");
  auto events = load_events(*config.events_csv);
  if (config.category) {
    events = filter_category(events, *config.category);
    if (events.empty()) throw DataError("no events in category '" + *config.category + "'");
  }
  const auto intervals = prepare_intervals(events).as_doubles();
  const auto losses = extract_losses(events).losses;

  const auto interval_rows = fit_series(intervals, config.interval_families, config.optimizer);
  Json body = {{"category", config.category ? Json(*config.category) : Json(nullptr)},
               {"n_events", events.size()},
               {"n_intervals", intervals.size()},
               {"fits", fit_rows_json(interval_rows)}};
  write_json(config, "fit_intervals.json", "fit", body, out);
  write_gof_table(config, "gof_intervals.csv", interval_rows, out);
  bool ok = all_converged(interval_rows, "interval", err);

  if (losses.empty()) {
    err << "warning: no disclosed losses; fitted intervals only\n";
  } else {
    const auto loss_rows = fit_series(losses, config.loss_families, config.optimizer);
    Json lb = {{"category", config.category ? Json(*config.category) : Json(nullptr)},
               {"n_losses", losses.size()},
               {"fits", fit_rows_json(loss_rows)}};
    write_json(config, "fit_losses.json", "fit", lb, out);
    write_gof_table(config, "gof_losses.csv", loss_rows, out);
    ok = all_converged(loss_rows, "loss", err) && ok;
  }
  return ok ? kOk : kNumerical;
}

int cmd_price(const RunConfig& config, std::ostream& out, std::ostream&) {
  const auto& terms = require_bond(config);
  const auto& model = require_model(config);
  const auto scenarios = simulate_bond_scenarios(terms, model);
  const auto mc = mc_price(scenarios, terms);
  const double det = deterministic_price(terms);

  const auto grids = make_grids(scenarios, config.grid);
  const auto coupon_curve = coupon_survival_curve(scenarios, grids.coupon);
  const auto notional_curve = notional_survival_curve(scenarios, grids.notional);
  const auto pl = probability_of_loss(scenarios, grids.notional);

  const std::vector<double> probs = {0.10, 0.25, 0.50, 0.75, 0.90, 0.95, 0.99};
  const auto quantiles = empirical_quantiles(scenarios.final_losses(), probs);

  Json body = {{"deterministic_price", det}, {"monte_carlo", to_json(mc)}};
  if (mc.price > 0.0) {
    const auto ys = yield_and_spread(mc.price, terms.coupon, terms.funding_rate);
    body["yield_pct"] = ys.yield_pct;
    body["spread_pct"] = ys.spread_pct;
  }
  body["triggers"] = {{"coupon", number_json(terms.coupon_trigger)},
                      {"notional", number_json(terms.notional_trigger)}};
  body["average_probability_of_loss_pct"] = average(pl) * 100.0;
  Json qt = Json::array();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    qt.push_back({{"probability", probs[i]}, {"total_loss", quantiles[i]}});
  }
  body["loss_quantiles"] = qt;

  if (config.prudent) {
    const auto pr = prudent_price(terms, model, *config.box, *config.prudent);
    Json params = Json::object();
    for (std::size_t i = 0; i < pr.parameters.size(); ++i) params[config.box->names[i]] = pr.parameters[i];
    body["prudent"] = {{"mode", std::string(prudent_mode_name(*config.prudent))},
                       {"price", pr.price},
                       {"parameters", params},
                       {"evaluations", pr.evaluations},
                       {"box", box_json_for(config)}};
  }
  write_json(config, "price.json", "price", body, out);

  write_survival(config, "coupon_survival.csv", coupon_curve, out);
  write_survival(config, "notional_survival.csv", notional_curve, out);
  {
    auto f = open_output(config, "probability_of_loss.csv");
    write_csv_header(f, header_for(config, "price"));
    f << "notional_trigger,probability_of_loss\n";
    for (std::size_t i = 0; i < pl.size(); ++i) {
      f << format_double(grids.notional[i]) << ',' << format_double(pl[i]) << '\n';
    }
    out << "wrote " << (config.out_dir / "probability_of_loss.csv").string() << '\n';
  }
  {
    auto f = open_output(config, "price_curve.csv");
    write_csv_header(f, header_for(config, "price"));
    f << "coupon_trigger,notional_trigger,price,yield_pct,spread_pct\n";
    for (const double ct : grids.coupon) {
      for (const double nt : grids.notional) {
        const double p = mc_price(scenarios, terms.with_triggers(ct, nt)).price;
        f << format_double(ct) << ',' << format_double(nt) << ',' << format_double(p);
        if (p > 0.0) {
          const auto ys = yield_and_spread(p, terms.coupon, terms.funding_rate);
          f << ',' << format_double(ys.yield_pct) << ',' << format_double(ys.spread_pct) << '\n';
        } else {
          f << ",,\n";
        }
      }
    }
    out << "wrote " << (config.out_dir / "price_curve.csv").string() << '\n';
  }
  {
    auto f = open_output(config, "loss_quantiles.csv");
    write_csv_header(f, header_for(config, "price"));
    f << "probability,total_loss\n";
    for (std::size_t i = 0; i < probs.size(); ++i) {
      f << format_double(probs[i]) << ',' << format_double(quantiles[i]) << '\n';
    }
    out << "wrote " << (config.out_dir / "loss_quantiles.csv").string() << '\n';
  }
  out << "price " << format_double(mc.price) << " (mc std error " << format_double(mc.mc_std_error)
      << ", deterministic " << format_double(det) << ")\n";
  return kOk;
}

int cmd_coupon(const RunConfig& config, std::ostream& out, std::ostream&) {
  const auto& terms = require_bond(config);
  const bool need_paths = config.coupon_method == CouponMethod::ParYield || !config.pl_pct ||
                          !config.stresses.empty();
  std::optional<ScenarioSet> base;
  std::optional<Grids> grids;
  if (need_paths) {
    base = simulate_bond_scenarios(terms, require_model(config));
    grids = make_grids(*base, config.grid);
  }

  // Bumped runs reuse the base-case trigger grids.
  auto quote_for = [&](const ScenarioSet* scenarios, std::optional<ParYieldSurface>* surface_out) {
    std::map<std::string, double> inputs;
    if (config.coupon_method == CouponMethod::ProbabilityOfLoss) {
      const double pl_pct = scenarios ? average(probability_of_loss(*scenarios, grids->notional)) * 100.0
                                      : *config.pl_pct;
      const double rate = coupon_rate_pl(config.reference_rate_pct, pl_pct, config.pnl_pct,
                                         config.constant_pct, config.multiplier);
      inputs = {{"reference_rate_pct", config.reference_rate_pct},
                {"pl_pct", pl_pct},
                {"pnl_pct", config.pnl_pct},
                {"constant_pct", config.constant_pct},
                {"multiplier", config.multiplier}};
      return make_quote(config.coupon_method, rate, terms.notional, inputs);
    }
    auto surface = par_yield_mc(*scenarios, terms, grids->coupon, grids->notional);
    inputs = {{"funding_rate", terms.funding_rate},
              {"deterministic_par_yield_pct", par_yield_deterministic(terms).rate_pct},
              {"grid_points", static_cast<double>(config.grid.points)},
              {"coupon_trigger_min", grids->coupon.front()},
              {"coupon_trigger_max", grids->coupon.back()},
              {"notional_trigger_min", grids->notional.front()},
              {"notional_trigger_max", grids->notional.back()},
              {"excluded_path_fraction", surface.exclusion_fraction()},
              {"flagged_pairs", static_cast<double>(surface.flagged_pairs.size())}};
    const double rate = surface.average_pct;
    if (surface_out) *surface_out = std::move(surface);
    return make_quote(config.coupon_method, rate, terms.notional, inputs);
  };

  std::optional<ParYieldSurface> surface;
  const ScenarioSet* base_ptr =
      (config.coupon_method == CouponMethod::ProbabilityOfLoss && config.pl_pct) ? nullptr
                                                                                 : &*base;
  const auto quote = quote_for(base_ptr, &surface);
  Json body = {{"quote", to_json(quote)}};

  Json stress = Json::array();
  for (const auto& s : config.stresses) {
    const auto scenarios = simulate_bond_scenarios(terms, stressed(require_model(config), s));
    auto q = to_json(quote_for(&scenarios, nullptr));
    q["label"] = s.label;
    stress.push_back(q);
  }
  if (!stress.empty()) body["stress"] = stress;
  write_json(config, "coupon.json", "coupon", body, out);

  if (surface) {
    auto f = open_output(config, "par_yield_curves.csv");
    write_csv_header(f, header_for(config, "coupon"));
    f << "coupon_trigger,notional_trigger,par_yield_pct,excluded_paths\n";
    for (std::size_t c = 0; c < surface->coupon_triggers.size(); ++c) {
      for (std::size_t n = 0; n < surface->notional_triggers.size(); ++n) {
        const std::size_t k = c * surface->notional_triggers.size() + n;
        f << format_double(surface->coupon_triggers[c]) << ','
          << format_double(surface->notional_triggers[n]) << ',' << format_double(surface->at(c, n))
          << ',' << surface->excluded_paths[k] << '\n';
      }
    }
    out << "wrote " << (config.out_dir / "par_yield_curves.csv").string() << '\n';
  }
  out << "coupon rate " << format_double(quote.coupon_rate_pct) << "% ("
      << coupon_method_name(quote.method) << ")\n";
  return kOk;
}

int cmd_greeks(const RunConfig& config, std::ostream& out, std::ostream&) {
  const auto& terms = require_bond(config);
  const auto& model = require_model(config);
  const auto bumps = config.bumps ? *config.bumps : GreekBumps::defaults(terms, model);
  bumps.validate();

  auto row = [&](const char* label, const SimulationConfig& m, bool with_rate) {
    const auto g = greeks(terms, m, bumps);
    Json params = Json::object();
    const auto p = model_params(m);
    for (std::size_t i = 0; i < p.size(); ++i) params[param_label(m, i)] = p[i];
    Json j = {{"point", label}, {"parameters", params}, {"price", mc_price(terms, m).price}};
    const Json sens = to_json(g);
    for (const auto& [k, v] : sens.items()) j[k] = v;
    if (!with_rate) j["dS_dr"] = nullptr;
    return j;
  };

  Json rows = Json::array();
  if (config.box && config.greeks_corners) {
    std::vector<double> lower, upper;
    for (const auto& b : config.box->bounds) {
      lower.push_back(b.lower);
      upper.push_back(b.upper);
    }
    rows.push_back(row("lower", with_model_parameters(model, lower), false));
    rows.push_back(row("middle", model, true));
    rows.push_back(row("upper", with_model_parameters(model, upper), false));
  } else {
    rows.push_back(row("middle", model, true));
  }
  Json body = {{"bumps", {{"lambda", bumps.lambda}, {"mu", bumps.mu}, {"sigma", bumps.sigma}, {"rate", bumps.rate}}},
               {"deterministic_dS_dr", deterministic_rate_sensitivity(terms)},
               {"rows", rows}};
  if (config.box) body["box"] = to_json(*config.box);
  write_json(config, "greeks.json", "greeks", body, out);
  return kOk;
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream&) {
  const auto& model = require_model(config);
  const auto paths = simulate_paths(model);
  auto f = open_output(config, "paths.csv");
  write_csv_header(f, header_for(config, "simulate"));
  write_paths_csv(f, paths);
  out << "wrote " << (config.out_dir / "paths.csv").string() << '\n';
  std::vector<double> totals;
  for (const auto& p : paths) totals.push_back(total_loss(p));
  const std::vector<double> probs = {0.5, 0.9, 0.99};
  const auto q = empirical_quantiles(totals, probs);
  out << "total loss quantiles 50%/90%/99%: " << format_double(q[0]) << ' ' << format_double(q[1])
      << ' ' << format_double(q[2]) << '\n';
  return kOk;
}

// ---- entry point --------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cyber bond pricing: fit, price, coupon, greeks, simulate"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> paths;
  std::optional<std::string> category;
  std::optional<std::string> method;
  int threads = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--seed", seed, "master seed (overrides config)");
    sub->add_option("--out-dir", out_dir, "output directory (overrides config)");
    sub->add_option("--paths", paths, "number of simulated paths (overrides config)");
    sub->add_option("--threads", threads, "OpenMP threads (0 = runtime default)");
  };
  auto* fit = app.add_subcommand("fit", "fit frequency and severity families to an event CSV");
  add_common(fit);
  fit->add_option("--category", category, "restrict to one event category");
  auto* price = app.add_subcommand("price", "price the bond and write curve data");
  add_common(price);
  auto* coupon = app.add_subcommand("coupon", "quote a coupon rate");
  add_common(coupon);
  coupon->add_option("--method", method, "pl | par");
  auto* greeks_cmd = app.add_subcommand("greeks", "finite-difference sensitivities");
  add_common(greeks_cmd);
  auto* simulate = app.add_subcommand("simulate", "dump simulated loss paths");
  add_common(simulate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfig;
  }

  try {
    if (threads > 0) kernels::omp::set_threads(threads);
    Overrides ov;
    ov.seed = seed;
    if (out_dir) ov.out_dir = fs::path(*out_dir);
    ov.paths = paths;
    ov.category = category;
    ov.method = method;
    const auto config = load_config(config_path, ov);
    if (*fit) return cmd_fit(config, out, err);
    if (*price) return cmd_price(config, out, err);
    if (*coupon) return cmd_coupon(config, out, err);
    if (*greeks_cmd) return cmd_greeks(config, out, err);
    return cmd_simulate(config, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const Json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace cyberbond::cli
