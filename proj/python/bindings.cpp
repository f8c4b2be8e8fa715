#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <variant>

#include "charpath/config.hpp"
#include "charpath/dirichlet.hpp"
#include "charpath/errors.hpp"
#include "charpath/moments.hpp"
#include "charpath/paths.hpp"
#include "charpath/randomseries.hpp"
#include "charpath/stats.hpp"
#include "charpath/verify.hpp"

namespace py = pybind11;
using namespace charpath;

namespace {

using TimeArg = std::variant<double, std::string>;

TimePoint to_time(const TimeArg& t) {
  if (const auto* s = std::get_if<std::string>(&t)) return parse_time_point(*s);
  return std::get<double>(t);
}

std::vector<TimePoint> to_times(const std::vector<TimeArg>& ts) {
  std::vector<TimePoint> out;
  for (const auto& t : ts) out.push_back(to_time(t));
  return out;
}

Parity to_parity(const std::string& s) {
  if (s == "odd") return Parity::odd;
  if (s == "even") return Parity::even;
  throw InvalidArgument("parity must be 'odd' or 'even'");
}

CharacterFilter to_filter(const std::string& s) {
  if (s == "odd") return CharacterFilter::odd;
  if (s == "even") return CharacterFilter::even;
  if (s == "all" || s == "nonprincipal") return CharacterFilter::nonprincipal;
  throw InvalidArgument("filter must be 'odd', 'even' or 'all'");
}

py::dict result_dict(const MomentResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["method"] = to_string(r.method);
  d["error_estimate"] = r.error_estimate;
  d["truncation"] = r.truncation ? py::cast(*r.truncation) : py::none();
  d["q"] = r.q ? py::cast(*r.q) : py::none();
  return d;
}

py::dict curve_dict(const TailCurve& c) {
  py::dict d;
  d["taus"] = c.taus;
  d["probs"] = c.probs;
  d["stderrs"] = c.stderrs;
  return d;
}

MomentSpec make_spec(const std::vector<TimeArg>& t, std::vector<std::uint32_t> n, std::vector<std::uint32_t> m,
                     const std::string& parity) {
  MomentSpec spec{to_times(t), std::move(n), std::move(m), to_parity(parity)};
  validate(spec);
  return spec;
}

}  // namespace

PYBIND11_MODULE(_charpath, m) {
  m.doc() = "Character paths, Steinhaus random series and their moments.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<LimitExceeded>(m, "LimitExceeded", base.ptr());

  py::class_<PrimeContext, std::shared_ptr<PrimeContext>>(m, "PrimeContext")
      .def_property_readonly("modulus", &PrimeContext::modulus)
      .def_property_readonly("primitive_root", &PrimeContext::primitive_root)
      .def("dlog", [](const PrimeContext& c, std::uint64_t n) { return c.dlog(n); });

  m.def("build_context", [](std::uint64_t q) { return std::const_pointer_cast<PrimeContext>(build_context(q)); },
        py::arg("q"));

  auto ctx_of = [](const std::shared_ptr<PrimeContext>& c) { return std::const_pointer_cast<const PrimeContext>(c); };

  m.def("char_value", [=](const std::shared_ptr<PrimeContext>& c, std::uint32_t j, std::int64_t n) {
    return char_value(Character(ctx_of(c), j), n);
  });
  m.def("gauss_sum", [=](const std::shared_ptr<PrimeContext>& c, std::uint32_t j) {
    return gauss_sum(Character(ctx_of(c), j));
  });
  m.def("partial_sum", [=](const std::shared_ptr<PrimeContext>& c, std::uint32_t j, const TimeArg& t) {
    return partial_sum(Character(ctx_of(c), j), to_time(t));
  });
  m.def("path_value", [=](const std::shared_ptr<PrimeContext>& c, std::uint32_t j, const TimeArg& t) {
    return path_value(Character(ctx_of(c), j), to_time(t));
  });
  m.def("fourier_path", [=](const std::shared_ptr<PrimeContext>& c, std::uint32_t j, const TimeArg& t,
                            std::uint64_t K) { return fourier_path(Character(ctx_of(c), j), to_time(t), K); });
  m.def("max_abs_sum", [=](const std::shared_ptr<PrimeContext>& c, std::uint32_t j) {
    return max_abs_sum(Character(ctx_of(c), j));
  });
  m.def(
      "sample_path",
      [=](const std::shared_ptr<PrimeContext>& c, std::uint32_t j, std::size_t grid) {
        const auto g = grid == 0 ? PathGrid::vertex(c->modulus()) : PathGrid::uniform(grid);
        const auto p = sample_path(Character(ctx_of(c), j), g);
        return py::make_tuple(std::vector<double>(g.points().begin(), g.points().end()), p.values);
      },
      py::arg("ctx"), py::arg("j"), py::arg("grid") = 0, "grid = 0 selects the vertex grid j/q.");

  m.def(
      "sample_series",
      [](const std::string& form, std::uint64_t terms, std::size_t grid, std::uint64_t seed, std::uint64_t stream) {
        SeriesSpec spec;
        spec.form = series_form_from_string(form);
        spec.truncation = Truncation::symmetric(terms);
        spec.grid = PathGrid::uniform(grid);
        const auto s = sample_series(spec, SeedSpec{seed, stream});
        py::dict d;
        d["t"] = std::vector<double>(spec.grid.points().begin(), spec.grid.points().end());
        d["values"] = s.values;
        d["eta"] = s.eta;
        d["sign_minus_one"] = s.sign_minus_one;
        d["sup_norm"] = s.sup_norm();
        return d;
      },
      py::arg("form") = "minus", py::arg("terms") = 10007, py::arg("grid") = 2048, py::arg("seed") = 0,
      py::arg("stream") = 0);

  m.def(
      "moment",
      [=](const std::vector<TimeArg>& t, std::vector<std::uint32_t> n, std::vector<std::uint32_t> mm,
          const std::string& parity, const std::string& method, std::optional<std::uint64_t> q, std::uint64_t A) {
        const auto spec = make_spec(t, std::move(n), std::move(mm), parity);
        if (method == "limit") return result_dict(M_limit(spec, A));
        if (!q) throw InvalidArgument("q is required for finite-q methods");
        if (method == "sigma") return result_dict(Mq_sigma(*q, spec));
        const auto ctx = build_context(*q);
        if (method == "direct") return result_dict(Mq_direct(ctx, spec));
        if (method == "fourier") return result_dict(Mq_fourier(ctx, spec));
        if (method == "full") return result_dict(Mq_full(ctx, spec));
        throw InvalidArgument("unknown moment method");
      },
      py::arg("t"), py::arg("n"), py::arg("m"), py::arg("parity") = "odd", py::arg("method") = "direct",
      py::arg("q") = py::none(), py::arg("A") = 100000);

  m.def("divisor_dN", &divisor_dN, py::arg("N"), py::arg("x"));
  m.def("divisor_lemma_check", &divisor_lemma_check);
  m.def(
      "beta",
      [](std::uint32_t N, const TimeArg& t, std::uint64_t x, std::optional<std::uint64_t> cap,
         const std::string& parity) { return beta(N, to_time(t), x, cap, to_parity(parity)); },
      py::arg("N"), py::arg("t"), py::arg("x"), py::arg("cap") = py::none(), py::arg("parity") = "odd");
  m.def("hyper_kloosterman", &hyper_kloosterman, py::arg("q"), py::arg("N"), py::arg("b"));
  m.def("twisted_gauss_average", [=](const std::shared_ptr<PrimeContext>& c, std::uint32_t N, std::uint64_t a,
                                     const std::string& sigma) {
    return twisted_gauss_average(ctx_of(c), N, a, to_parity(sigma));
  });
  m.def("riemann_zeta", &riemann_zeta, py::arg("s"));
  m.def(
      "ramanujan_check",
      [](double s, std::uint64_t A) {
        const auto r = ramanujan_check(s, A);
        return py::make_tuple(r.partial, r.exact, r.tail_estimate);
      },
      py::arg("s"), py::arg("A"));

  m.def(
      "phi_q",
      [=](const std::shared_ptr<PrimeContext>& c, const std::vector<double>& taus, const std::string& filter) {
        return curve_dict(phi_q(ctx_of(c), taus, to_filter(filter)));
      },
      py::arg("ctx"), py::arg("taus"), py::arg("filter") = "odd");
  m.def(
      "phi_limit",
      [](const std::vector<double>& taus, std::size_t samples, std::uint64_t terms, std::size_t grid,
         const std::string& form, std::uint64_t seed) {
        PhiLimitConfig cfg{samples, terms, grid, series_form_from_string(form), seed};
        return curve_dict(phi_limit(taus, cfg));
      },
      py::arg("taus"), py::arg("samples") = 10000, py::arg("terms") = 10000, py::arg("grid") = 4096,
      py::arg("form") = "minus", py::arg("seed") = 0);
  m.def(
      "increment_moment",
      [=](const std::shared_ptr<PrimeContext>& c, const TimeArg& s, const TimeArg& t, unsigned order) {
        return increment_moment(ctx_of(c), to_time(s), to_time(t), order);
      },
      py::arg("ctx"), py::arg("s"), py::arg("t"), py::arg("order") = 4);

  m.def(
      "verify",
      [](const std::string& suite, std::uint64_t seed) {
        py::list rows;
        for (const auto& c : run_suite(suite, SuiteOptions{seed}))
          rows.append(py::make_tuple(c.name, c.value, c.bound, c.pass));
        return rows;
      },
      py::arg("suite"), py::arg("seed") = 0);
  m.def("set_thread_count", &set_thread_count);
}
