#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "csize/bench.hpp"
#include "csize/harness.hpp"
#include "csize/lin_checker.hpp"

namespace py = pybind11;

namespace {

csize::StructureKind structure_arg(const std::string& text) {
  auto kind = csize::parse_structure(text);
  if (!kind) throw py::value_error("unknown structure '" + text + "'");
  return *kind;
}

// Thread ids cross the boundary as plain ints.
class PySet {
 public:
  PySet(const std::string& structure, std::size_t expected, std::size_t max_threads, bool leak) {
    csize::SetOptions options;
    options.max_threads = max_threads;
    options.reclamation = leak ? csize::Reclamation::Leak : csize::Reclamation::Deferred;
    set_ = csize::make_set(structure_arg(structure), expected, options);
  }

  std::uint32_t register_thread() { return set_->register_thread().value; }
  void deregister_thread(std::uint32_t tid) { set_->deregister_thread(csize::ThreadId{tid}); }
  bool insert(std::uint32_t tid, csize::Key k) { return set_->insert(csize::ThreadId{tid}, k); }
  bool remove(std::uint32_t tid, csize::Key k) { return set_->remove(csize::ThreadId{tid}, k); }
  bool contains(std::uint32_t tid, csize::Key k) { return set_->contains(csize::ThreadId{tid}, k); }
  std::int64_t size(std::uint32_t tid) { return set_->size(csize::ThreadId{tid}); }
  std::string structure() const { return std::string(csize::name(set_->kind())); }

 private:
  std::unique_ptr<csize::ConcurrentSet> set_;
};

py::tuple check_history(const std::string& text, std::size_t max_states) {
  std::istringstream in(text);
  csize::History h;
  try {
    h = csize::read_history(in);
  } catch (const std::runtime_error& e) {
    throw py::value_error(e.what());
  }
  csize::CheckLimits limits;
  limits.max_states = max_states;
  csize::CheckResult r;
  {
    py::gil_scoped_release release;
    r = csize::check_linearizable(h, limits);
  }
  std::vector<std::string> witness;
  for (const auto& e : r.witness) witness.push_back(csize::format_event(e));
  return py::make_tuple(std::string(csize::name(r.verdict)), witness);
}

std::string run_stress(const std::string& structure, std::size_t workers, std::size_t size_threads,
                       csize::Key key_range, std::size_t ops, std::size_t size_ops, std::uint64_t seed,
                       std::size_t prefill, double yield_probability) {
  csize::StressConfig c;
  c.structure = structure_arg(structure);
  c.workers = workers;
  c.size_threads = size_threads;
  c.key_range = key_range;
  c.ops_per_worker = ops;
  c.size_ops_per_thread = size_ops;
  c.seed = seed;
  c.prefill = prefill;
  c.yield_probability = yield_probability;
  csize::History h;
  {
    py::gil_scoped_release release;
    h = csize::run_stress(c);
  }
  std::ostringstream out;
  csize::write_history(out, h);
  return out.str();
}

std::string run_bench(const std::string& structure, const std::string& workload, std::size_t workers,
                      std::size_t size_threads, std::size_t initial_size, double duration, std::size_t warmup,
                      std::size_t rounds, std::uint64_t seed) {
  csize::BenchConfig c;
  c.structure = structure_arg(structure);
  auto wl = csize::parse_workload(workload);
  if (!wl) throw py::value_error("unknown workload '" + workload + "'");
  c.workload = *wl;
  c.workers = workers;
  c.size_threads = size_threads;
  c.initial_size = initial_size;
  c.duration_s = duration;
  c.warmup = warmup;
  c.rounds = rounds;
  c.seed = seed;
  csize::BenchReport report;
  {
    py::gil_scoped_release release;
    report = csize::run_bench(c);
  }
  std::ostringstream out;
  csize::write_csv(out, report);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_csize, m) {
  m.doc() = "Concurrent sets with a linearizable size()";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const std::invalid_argument& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const std::out_of_range& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<PySet>(m, "Set")
      .def(py::init<const std::string&, std::size_t, std::size_t, bool>(), py::arg("structure") = "hash",
           py::arg("expected") = 1024, py::arg("max_threads") = 64, py::arg("leak") = false)
      .def("register_thread", &PySet::register_thread)
      .def("deregister_thread", &PySet::deregister_thread, py::arg("tid"))
      .def("insert", &PySet::insert, py::arg("tid"), py::arg("key"))
      .def("remove", &PySet::remove, py::arg("tid"), py::arg("key"))
      .def("contains", &PySet::contains, py::arg("tid"), py::arg("key"))
      .def("size", &PySet::size, py::arg("tid"))
      .def_property_readonly("structure", &PySet::structure);

  m.def("check_history", &check_history, py::arg("text"),
        py::arg("max_states") = csize::CheckLimits{}.max_states,
        "Check a history in the text format. Returns (verdict, witness lines).");
  m.def("run_stress", &run_stress, py::arg("structure") = "list", py::arg("workers") = 2,
        py::arg("size_threads") = 1, py::arg("key_range") = 4, py::arg("ops") = 50, py::arg("size_ops") = 20,
        py::arg("seed") = 1, py::arg("prefill") = 0, py::arg("yield_probability") = 0.0,
        "Record a stress-run history; returns it in the text format.");
  m.def("run_bench", &run_bench, py::arg("structure") = "hash", py::arg("workload") = "update-heavy",
        py::arg("workers") = 1, py::arg("size_threads") = 0, py::arg("initial_size") = 1000,
        py::arg("duration") = 1.0, py::arg("warmup") = 3, py::arg("rounds") = 5, py::arg("seed") = 1,
        "Run the throughput benchmark; returns the CSV report.");
  m.def("table_size_for", &csize::table_size_for, py::arg("expected_elements"));
  m.def(
      "key_range_for",
      [](std::size_t n, const std::string& workload) {
        auto wl = csize::parse_workload(workload);
        if (!wl) throw py::value_error("unknown workload '" + workload + "'");
        return csize::key_range_for(n, csize::mix_of(*wl));
      },
      py::arg("initial_size"), py::arg("workload") = "update-heavy");
}
