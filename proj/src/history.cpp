#include "csize/history.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace csize {

std::string_view name(OpType op) {
  switch (op) {
    case OpType::Insert: return "insert";
    case OpType::Delete: return "delete";
    case OpType::Contains: return "contains";
    case OpType::Size: return "size";
  }
  return "?";
}

std::optional<OpType> parse_op(std::string_view text) {
  for (auto op : {OpType::Insert, OpType::Delete, OpType::Contains, OpType::Size}) {
    if (name(op) == text) return op;
  }
  return std::nullopt;
}

namespace {

std::string result_token(const Event& e) {
  if (e.pending()) return "pending";
  switch (e.op) {
    case OpType::Insert:
    case OpType::Delete: return e.result ? "ok" : "fail";
    case OpType::Contains: return e.result ? "true" : "false";
    case OpType::Size: return std::to_string(e.result);
  }
  return "?";
}

std::optional<std::int64_t> to_int(std::string_view s) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw std::runtime_error("history line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string format_event(const Event& e) {
  std::ostringstream out;
  out << e.thread << ' ' << name(e.op) << ' ';
  if (e.op == OpType::Size) {
    out << '-';
  } else {
    out << e.arg;
  }
  out << ' ' << result_token(e) << ' ' << e.invoke_ns << ' ';
  if (e.pending()) {
    out << "pending";
  } else {
    out << e.response_ns;
  }
  return out.str();
}

void write_history(std::ostream& out, const History& history) {
  out << "# csize-history";
  for (const auto& [k, v] : history.config) {
    if (k == "initial") continue;
    out << ' ' << k << '=' << v;
  }
  if (!history.initial.empty()) {
    out << " initial=";
    for (std::size_t i = 0; i < history.initial.size(); ++i) {
      out << (i ? "," : "") << history.initial[i];
    }
  }
  out << '\n';
  for (const auto& e : history.events) out << format_event(e) << '\n';
}

History read_history(std::istream& in) {
  History h;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    if (line[0] == '#') {
      std::string tag;
      fields >> tag >> tag;
      if (tag != "csize-history") fail(lineno, "expected '# csize-history' header");
      if (header_seen) fail(lineno, "duplicate header");
      header_seen = true;
      std::string kv;
      while (fields >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) fail(lineno, "malformed config entry '" + kv + "'");
        auto key = kv.substr(0, eq);
        auto value = kv.substr(eq + 1);
        if (key == "initial") {
          std::istringstream keys(value);
          std::string item;
          while (std::getline(keys, item, ',')) {
            auto k = to_int(item);
            if (!k) fail(lineno, "bad initial key '" + item + "'");
            h.initial.push_back(*k);
          }
        } else {
          h.config[key] = value;
        }
      }
      continue;
    }

    std::string tid, op, arg, result, invoke, response, extra;
    if (!(fields >> tid >> op >> arg >> result >> invoke >> response) || (fields >> extra)) {
      fail(lineno, "expected 6 fields");
    }
    Event e;
    auto t = to_int(tid);
    if (!t || *t < 0) fail(lineno, "bad thread id '" + tid + "'");
    e.thread = static_cast<std::uint32_t>(*t);
    auto parsed_op = parse_op(op);
    if (!parsed_op) fail(lineno, "unknown operation '" + op + "'");
    e.op = *parsed_op;
    if (e.op == OpType::Size) {
      if (arg != "-") fail(lineno, "size takes no argument");
    } else {
      auto k = to_int(arg);
      if (!k) fail(lineno, "bad key '" + arg + "'");
      e.arg = *k;
    }
    auto inv = to_int(invoke);
    if (!inv) fail(lineno, "bad invoke time '" + invoke + "'");
    e.invoke_ns = *inv;

    const bool pending = result == "pending";
    if (pending != (response == "pending")) fail(lineno, "pending result needs pending response");
    if (pending) {
      e.response_ns = kPending;
    } else {
      auto resp = to_int(response);
      if (!resp) fail(lineno, "bad response time '" + response + "'");
      e.response_ns = *resp;
      if (e.response_ns < e.invoke_ns) fail(lineno, "response precedes invocation");
      switch (e.op) {
        case OpType::Insert:
        case OpType::Delete:
          if (result != "ok" && result != "fail") fail(lineno, "expected ok/fail");
          e.result = result == "ok";
          break;
        case OpType::Contains:
          if (result != "true" && result != "false") fail(lineno, "expected true/false");
          e.result = result == "true";
          break;
        case OpType::Size: {
          auto v = to_int(result);
          if (!v) fail(lineno, "bad size result '" + result + "'");
          e.result = *v;
          break;
        }
      }
    }
    h.events.push_back(e);
  }
  return h;
}

}  // namespace csize
