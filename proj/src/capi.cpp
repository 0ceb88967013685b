#include "altspin/altspin.h"

#include <cstdio>
#include <new>
#include <optional>
#include <string>

#include "altspin/dynamics.hpp"
#include "altspin/error.hpp"
#include "altspin/experiments.hpp"

struct altspin_operator {
  altspin::SparseOperator op;
};
struct altspin_state {
  altspin::StateVector psi;
};
struct altspin_density {
  altspin::DensityMatrix rho;
};
struct altspin_quench {
  altspin::QuenchEvolution ev;
};

namespace {

thread_local std::string g_last_error;

altspin_status code_of(altspin::ErrorKind kind) {
  switch (kind) {
    case altspin::ErrorKind::Parameter: return ALTSPIN_ERR_PARAMETER;
    case altspin::ErrorKind::Capability: return ALTSPIN_ERR_CAPABILITY;
    case altspin::ErrorKind::Convergence: return ALTSPIN_ERR_CONVERGENCE;
    case altspin::ErrorKind::Dimension: return ALTSPIN_ERR_DIMENSION;
    case altspin::ErrorKind::Io: return ALTSPIN_ERR_IO;
    case altspin::ErrorKind::Config: return ALTSPIN_ERR_CONFIG;
  }
  return ALTSPIN_ERR_INTERNAL;
}

altspin_status fail(altspin_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
altspin_status guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return ALTSPIN_OK;
  } catch (const altspin::Error& e) {
    return fail(code_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ALTSPIN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ALTSPIN_ERR_INTERNAL, e.what());
  }
}

void need(const void* p, const char* what) {
  if (!p) altspin::throw_parameter(std::string(what) + " is null");
}

altspin::HamiltonianParams params_of(const altspin_params* p) {
  need(p, "params");
  altspin::HamiltonianParams out{p->n, p->lambda, p->delta, p->b};
  out.validate();
  return out;
}

std::vector<int> sites_of(const int* sites, size_t count) {
  if (count == 0) altspin::throw_parameter("empty site list");
  need(sites, "sites");
  return {sites, sites + count};
}

void copy_complex(const Eigen::MatrixXcd& m, double* out, size_t expected) {
  if (static_cast<size_t>(m.size()) != expected) {
    altspin::throw_dimension("buffer holds " + std::to_string(expected) + " complex values, need " +
                             std::to_string(m.size()));
  }
  need(out, "output buffer");
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    out[2 * i] = m.data()[i].real();
    out[2 * i + 1] = m.data()[i].imag();
  }
}

void emit(altspin_line_fn log, void* user, const std::string& line) {
  if (log) log(line.c_str(), user);
}

}  // namespace

extern "C" {

const char* altspin_version(void) { return altspin::kVersion; }

const char* altspin_last_error(void) { return g_last_error.c_str(); }

const char* altspin_status_name(altspin_status status) {
  switch (status) {
    case ALTSPIN_OK: return "ok";
    case ALTSPIN_ERR_PARAMETER: return "parameter error";
    case ALTSPIN_ERR_CAPABILITY: return "capability error";
    case ALTSPIN_ERR_CONVERGENCE: return "convergence error";
    case ALTSPIN_ERR_DIMENSION: return "dimension error";
    case ALTSPIN_ERR_IO: return "io error";
    case ALTSPIN_ERR_CONFIG: return "config error";
    case ALTSPIN_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

altspin_status altspin_hamiltonian(const altspin_params* p, int mz, int full_space, altspin_operator** out) {
  return guard([&] {
    need(out, "out");
    const auto params = params_of(p);
    const auto basis = full_space ? altspin::SectorBasis::full(params.n) : altspin::SectorBasis::sector(params.n, mz);
    *out = new altspin_operator{altspin::build_hamiltonian(params, basis)};
  });
}

altspin_status altspin_operator_dim(const altspin_operator* op, size_t* dim) {
  return guard([&] {
    need(op, "operator");
    need(dim, "dim");
    *dim = op->op.dim();
  });
}

altspin_status altspin_operator_apply(const altspin_operator* op, const double* in, double* out, size_t dim) {
  return guard([&] {
    need(op, "operator");
    need(in, "input");
    need(out, "output");
    if (dim != op->op.dim()) altspin::throw_dimension("vector length does not match the operator");
    const auto* x = reinterpret_cast<const altspin::cplx*>(in);
    auto* y = reinterpret_cast<altspin::cplx*>(out);
    op->op.multiply(std::span<const altspin::cplx>(x, dim), std::span<altspin::cplx>(y, dim));
  });
}

altspin_status altspin_operator_lowest(const altspin_operator* op, int k, double tol, uint64_t seed, double* values) {
  return guard([&] {
    need(op, "operator");
    need(values, "values");
    const auto r = altspin::lanczos(op->op, k, tol, seed);
    std::copy(r.values.begin(), r.values.end(), values);
  });
}

void altspin_operator_free(altspin_operator* op) { delete op; }

altspin_status altspin_ground_state(const altspin_params* p, altspin_state** out, double* e0, double* gap,
                                    int* degeneracy) {
  return guard([&] {
    need(out, "out");
    const auto gm = altspin::ground_manifold(params_of(p));
    if (e0) *e0 = gm.e0;
    if (gap) *gap = gm.gap;
    if (degeneracy) *degeneracy = gm.degeneracy;
    *out = new altspin_state{gm.states.front()};
  });
}

altspin_status altspin_neel_state(int n, altspin_state** out) {
  return guard([&] {
    need(out, "out");
    *out = new altspin_state{altspin::neel_state(n)};
  });
}

altspin_status altspin_state_dim(const altspin_state* s, size_t* dim) {
  return guard([&] {
    need(s, "state");
    need(dim, "dim");
    *dim = s->psi.dim();
  });
}

altspin_status altspin_state_amplitudes(const altspin_state* s, double* out, size_t dim) {
  return guard([&] {
    need(s, "state");
    copy_complex(s->psi.amplitudes(), out, dim);
  });
}

altspin_status altspin_state_mz(const altspin_state* s, int* mz) {
  return guard([&] {
    need(s, "state");
    need(mz, "mz");
    const auto m = s->psi.basis().mz();
    if (!m) altspin::throw_parameter("state lives on the full space");
    *mz = *m;
  });
}

altspin_status altspin_state_ggm(const altspin_state* s, int full_mode, double* value) {
  return guard([&] {
    need(s, "state");
    need(value, "value");
    *value = altspin::ggm(s->psi, full_mode ? altspin::GgmMode::Full : altspin::GgmMode::Restricted).value;
  });
}

altspin_status altspin_state_reduce(const altspin_state* s, const int* sites, size_t count, altspin_density** out) {
  return guard([&] {
    need(s, "state");
    need(out, "out");
    const auto keep = sites_of(sites, count);
    *out = new altspin_density{altspin::partial_trace(s->psi, keep)};
  });
}

void altspin_state_free(altspin_state* s) { delete s; }

altspin_status altspin_thermal_reduced(const altspin_params* p, double beta, const int* sites, size_t count,
                                       altspin_density** out) {
  return guard([&] {
    need(out, "out");
    const auto params = params_of(p);
    const auto keep = sites_of(sites, count);
    if (!(beta > 0.0)) altspin::throw_parameter("beta must be positive");
    const auto g = params.n <= altspin::kThermalMaxSites ? altspin::thermal_state(params, beta)
                                                          : altspin::low_temperature_state(params, beta);
    *out = new altspin_density{g.reduced(keep)};
  });
}

altspin_status altspin_density_dim(const altspin_density* rho, size_t* dim) {
  return guard([&] {
    need(rho, "density");
    need(dim, "dim");
    *dim = static_cast<size_t>(rho->rho.matrix.rows());
  });
}

altspin_status altspin_density_matrix(const altspin_density* rho, double* out, size_t dim) {
  return guard([&] {
    need(rho, "density");
    if (dim != static_cast<size_t>(rho->rho.matrix.rows())) altspin::throw_dimension("density dimension mismatch");
    copy_complex(rho->rho.matrix, out, dim * dim);  // column-major
  });
}

altspin_status altspin_density_entropy(const altspin_density* rho, double* value) {
  return guard([&] {
    need(rho, "density");
    need(value, "value");
    *value = altspin::von_neumann_entropy(rho->rho);
  });
}

altspin_status altspin_density_log_negativity(const altspin_density* rho, double* value) {
  return guard([&] {
    need(rho, "density");
    need(value, "value");
    *value = altspin::log_negativity(rho->rho);
  });
}

altspin_status altspin_density_czz(const altspin_density* rho, double* value) {
  return guard([&] {
    need(rho, "density");
    need(value, "value");
    *value = altspin::classical_correlator_zz(rho->rho);
  });
}

void altspin_density_free(altspin_density* rho) { delete rho; }

altspin_status altspin_quench_create(const altspin_state* psi0, const altspin_params* final_params,
                                     altspin_quench** out) {
  return guard([&] {
    need(psi0, "state");
    need(out, "out");
    *out = new altspin_quench{altspin::QuenchEvolution(psi0->psi, params_of(final_params))};
  });
}

altspin_status altspin_quench_echo(const altspin_quench* q, double t, double* echo) {
  return guard([&] {
    need(q, "quench");
    need(echo, "echo");
    *echo = q->ev.echo_at(t);
  });
}

altspin_status altspin_quench_state(const altspin_quench* q, double t, altspin_state** out) {
  return guard([&] {
    need(q, "quench");
    need(out, "out");
    *out = new altspin_state{q->ev.state_at(t)};
  });
}

void altspin_quench_free(altspin_quench* q) { delete q; }

altspin_status altspin_scan_run(const char* config_path, const altspin_run_options* opt, altspin_line_fn log,
                                void* user) {
  return guard([&] {
    need(config_path, "config path");
    altspin::RunOptions ro;
    if (opt) {
      if (opt->experiment) ro.experiment = opt->experiment;
      if (opt->n) ro.n = opt->n;
      if (opt->workers) ro.workers = opt->workers;
      if (opt->out) ro.out = opt->out;
      if (opt->has_seed) ro.seed = opt->seed;
      ro.resume = opt->resume != 0;
    }
    ro.log = [&](const std::string& s) { emit(log, user, s); };
    const auto summary = altspin::run_scan(altspin::load_config(config_path), ro);
    emit(log, user,
         "wrote " + std::to_string(summary.rows) + " rows (" + std::to_string(summary.errors) + " errors) to " +
             summary.csv_path);
    for (const auto& [key, value] : summary.summary) emit(log, user, key + " = " + altspin::format_real(value));
  });
}

altspin_status altspin_validate(const char* csv_path, altspin_line_fn log, void* user, int* ok) {
  return guard([&] {
    need(csv_path, "path");
    need(ok, "ok");
    const auto rep = altspin::validate_result(csv_path);
    for (const auto& p : rep.problems) emit(log, user, p);
    emit(log, user, std::to_string(rep.rows) + " rows, " + (rep.ok ? "valid" : "INVALID"));
    *ok = rep.ok ? 1 : 0;
  });
}

altspin_status altspin_oracle(int n, uint64_t seed, altspin_line_fn log, void* user, int* failures) {
  return guard([&] {
    need(failures, "failures");
    *failures = 0;
    altspin::run_oracle(n, seed, [&](const altspin::OracleCheck& c) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s %-36s %.3e (tol %.1e)%s%s", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                    c.value, c.tolerance, c.detail.empty() ? "" : "  ", c.detail.c_str());
      if (!c.passed) ++*failures;
      emit(log, user, buf);
    });
  });
}

}  // extern "C"
