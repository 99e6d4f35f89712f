// Text layout:
//   blocks K d_1 ... d_K
//   objective
//   <K matrices, one row per line>
//   constraint <eq|le|ge> <rhs> <term count>
//   term <block>
//   <matrix rows>
//   ...
//   view <name> <block> <row> <col> <rows> <cols> <0|1>

#include <sstream>

#include "dfrc/sdp.hpp"
#include "kv.hpp"

namespace dfrc::sdp {

namespace {

const char* sense_name(Sense s) {
  switch (s) {
  case Sense::Equal: return "eq";
  case Sense::LessEqual: return "le";
  case Sense::GreaterEqual: return "ge";
  }
  return "eq";
}

Sense parse_sense(const std::string& s) {
  if (s == "eq") return Sense::Equal;
  if (s == "le") return Sense::LessEqual;
  if (s == "ge") return Sense::GreaterEqual;
  throw ConfigError("sdp text: unknown sense `" + s + "`");
}

void write_matrix(std::ostream& out, const RMat& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << detail::format_double(m(r, c));
    }
    out << '\n';
  }
}

class Reader {
public:
  explicit Reader(const std::string& text) : in_(text) {}

  std::string word(const char* what) {
    std::string w;
    if (!(in_ >> w)) throw ConfigError(std::string("sdp text: unexpected end while reading ") + what);
    return w;
  }

  void expect(const std::string& keyword) {
    const std::string w = word(keyword.c_str());
    if (w != keyword) throw ConfigError("sdp text: expected `" + keyword + "`, found `" + w + "`");
  }

  int integer(const char* what) { return detail::parse_int(what, word(what)); }
  double number(const char* what) { return detail::parse_double(what, word(what)); }

  RMat matrix(int dim) {
    RMat m(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) m(r, c) = number("matrix entry");
    return m;
  }

  bool done() {
    in_ >> std::ws;
    return in_.eof();
  }

private:
  std::istringstream in_;
};

} // namespace

std::string to_text(const SdpProblem& problem) {
  problem.validate();
  std::ostringstream out;
  out << "blocks " << problem.num_blocks();
  for (int d : problem.block_dims) out << ' ' << d;
  out << "\nobjective\n";
  for (const auto& c : problem.objective) write_matrix(out, c);
  for (const auto& con : problem.constraints) {
    out << "constraint " << sense_name(con.sense) << ' ' << detail::format_double(con.rhs) << ' '
        << con.terms.size() << '\n';
    for (const auto& t : con.terms) {
      out << "term " << t.block << '\n';
      write_matrix(out, t.coeff);
    }
  }
  for (const auto& [name, v] : problem.views)
    out << "view " << name << ' ' << v.block << ' ' << v.row << ' ' << v.col << ' ' << v.rows << ' ' << v.cols
        << ' ' << (v.complex ? 1 : 0) << '\n';
  return out.str();
}

SdpProblem from_text(const std::string& text) {
  Reader in(text);
  SdpProblem p;
  in.expect("blocks");
  const int nb = in.integer("block count");
  if (nb < 0) throw ConfigError("sdp text: negative block count");
  for (int b = 0; b < nb; ++b) {
    const int d = in.integer("block dimension");
    if (d < 1) throw ConfigError("sdp text: block dimension must be >= 1");
    p.add_block(d);
  }
  in.expect("objective");
  for (int b = 0; b < nb; ++b) p.objective[b] = in.matrix(p.block_dims[b]);

  while (!in.done()) {
    const std::string kind = in.word("record");
    if (kind == "constraint") {
      Constraint con;
      con.sense = parse_sense(in.word("sense"));
      con.rhs = in.number("rhs");
      const int nt = in.integer("term count");
      for (int k = 0; k < nt; ++k) {
        in.expect("term");
        const int b = in.integer("term block");
        if (b < 0 || b >= nb) throw ConfigError("sdp text: term block out of range");
        con.terms.push_back({b, in.matrix(p.block_dims[b])});
      }
      p.constraints.push_back(std::move(con));
    } else if (kind == "view") {
      const std::string name = in.word("view name");
      View v;
      v.block = in.integer("view block");
      v.row = in.integer("view row");
      v.col = in.integer("view col");
      v.rows = in.integer("view rows");
      v.cols = in.integer("view cols");
      v.complex = in.integer("view complex flag") != 0;
      p.views[name] = v;
    } else {
      throw ConfigError("sdp text: unknown record `" + kind + "`");
    }
  }
  p.validate();
  return p;
}

} // namespace dfrc::sdp
