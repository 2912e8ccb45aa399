#include "bbg/cli.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace bbg::cli {

namespace {

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string &path, const std::string &text, std::ostream &out) {
  if (path.empty()) {
    out << text << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f)
    throw std::invalid_argument("cannot write " + path);
  f << text << "\n";
}

nlohmann::json element_payload_json(const Element &e) { return nlohmann::json(e.w); }

nlohmann::json field_value_json(const FieldElementK &v) {
  nlohmann::json j;
  if (v.is_regular()) {
    j["r"] = element_payload_json(*v.regular);
  } else {
    j["parabolic"]["u"] = element_payload_json(v.parabolic->gens.front());
    j["parabolic"]["flip"] = element_payload_json(v.parabolic->flip);
  }
  return j;
}

}  // namespace

std::string certificate_json(Pipeline &pipe, const UnipotentCertificate &cert, uint64_t seed) {
  nlohmann::json j;
  j["p"] = cert.p.to_decimal();
  j["route"] = cert.route == CertificateRoute::OnePath ? "one-path" : "three-path";
  j["steps"] = cert.steps;
  j["walk_length"] = cert.walk_length;
  j["seed"] = seed;
  j["group"] = nlohmann::json::parse(pipe.spec().to_json());
  auto base_u = pipe.to_base(cert.u);
  if (!base_u)
    throw std::logic_error("unipotent element did not project to the base group");
  j["u"] = nlohmann::json::parse(pipe.base_element_json(*base_u));
  j["verified"] = true;
  return j.dump(2);
}

std::string matrix3k_json(FieldK &K, const Matrix3K &m) {
  (void)K;
  nlohmann::json j = nlohmann::json::array();
  for (int i = 0; i < 3; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < 3; ++c)
      row.push_back(field_value_json(m.at(i, c)));
    j.push_back(row);
  }
  return j.dump();
}

int cmd_unipotent(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
  GroupSpec spec;
  try {
    spec = GroupSpec::from_json(read_file(cfg.spec_path));
  } catch (const std::exception &ex) {
    err << "spec error: " << ex.what() << "\n";
    return kUsage;
  }
  if (spec.field.p() == 2) {
    err << "odd characteristic required (the even case has its own involution finder)\n";
    return kUsage;
  }
  std::optional<BigUint> hint;
  if (!cfg.p_hint.empty())
    hint = BigUint::from_decimal(cfg.p_hint);

  struct JobResult {
    bool ok = false;
    std::string json;
    std::string error;
    bool budget = false;
  };
  std::vector<JobResult> results(std::max(1u, cfg.jobs));
  auto run_one = [&](unsigned idx) {
    JobResult &res = results[idx];
    try {
      Pipeline pipe = Pipeline::build(spec, cfg.seed + idx, cfg.confidence);
      UnipotentCertificate cert = find_characteristic_and_unipotent(pipe.field(), hint);
      res.json = certificate_json(pipe, cert, cfg.seed + idx);
      res.ok = true;
    } catch (const RetryExhausted &ex) {
      res.error = ex.what();
      res.budget = true;
    } catch (const std::exception &ex) {
      res.error = ex.what();
    }
  };

  if (results.size() == 1) {
    run_one(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned i = 0; i < results.size(); ++i)
      threads.emplace_back(run_one, i);
    for (auto &t : threads)
      t.join();
  }
  // deterministic winner: the lowest seed that produced a verified certificate
  for (const JobResult &res : results) {
    if (res.ok) {
      try {
        write_output(cfg.out_path, res.json, out);
      } catch (const std::exception &ex) {
        err << ex.what() << "\n";
        return kUsage;
      }
      return kOk;
    }
  }
  bool budget = true;
  for (const JobResult &res : results) {
    err << "seed job failed: " << res.error << "\n";
    budget = budget && res.budget;
  }
  return budget ? kBudget : kUsage;
}

int cmd_coordinatize(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
  GroupSpec spec;
  try {
    spec = GroupSpec::from_json(read_file(cfg.spec_path));
  } catch (const std::exception &ex) {
    err << "spec error: " << ex.what() << "\n";
    return kUsage;
  }
  if (spec.field.p() == 2) {
    err << "odd characteristic required\n";
    return kUsage;
  }
  try {
    Pipeline pipe = Pipeline::build(spec, cfg.seed, cfg.confidence);
    FieldK &K = pipe.field();

    uint64_t m = std::min<uint64_t>(spec.field.p(), 16);
    std::vector<FieldElementK> img;
    img.push_back(K.zero());
    for (uint64_t r = 1; r < m; ++r)
      img.push_back(K.add(img.back(), K.one()).value());
    auto index_of = [&](const FieldElementK &v) -> long {
      for (size_t i = 0; i < img.size(); ++i)
        if (K.eq(v, img[i]))
          return static_cast<long>(i);
      return -1;  // out of the printed range
    };

    std::ostringstream table;
    table << "add table (residues 0.." << m - 1 << "):\n";
    for (uint64_t i = 0; i < m; ++i) {
      for (uint64_t j = 0; j < m; ++j)
        table << index_of(K.add(img[i], img[j]).value()) << (j + 1 < m ? " " : "\n");
    }
    table << "mul table (residues 0.." << m - 1 << "):\n";
    for (uint64_t i = 0; i < m; ++i) {
      for (uint64_t j = 0; j < m; ++j)
        table << index_of(K.mul(img[i], img[j]).value()) << (j + 1 < m ? " " : "\n");
    }
    out << table.str();

    nlohmann::json j;
    j["spec"] = nlohmann::json::parse(spec.to_json());
    j["seed"] = cfg.seed;
    j["confidence"] = cfg.confidence;
    j["frame"] = nlohmann::json::parse(frame_to_json(pipe.frame()));
    write_output(cfg.out_path, j.dump(2), out);
    return kOk;
  } catch (const RetryExhausted &ex) {
    err << ex.what() << "\n";
    return kBudget;
  } catch (const std::exception &ex) {
    err << ex.what() << "\n";
    return kUsage;
  }
}

namespace {

Pipeline pipeline_from_frame_file(const std::string &path, unsigned confidence) {
  nlohmann::json j = nlohmann::json::parse(read_file(path));
  GroupSpec spec = GroupSpec::from_json(j.at("spec").dump());
  uint64_t seed = j.at("seed").get<uint64_t>();
  return Pipeline::build_with_frame(spec, seed, j.at("frame").dump(), confidence);
}

}  // namespace

int cmd_rho(const RunConfig &cfg, const RhoConfig &rho_cfg, std::ostream &out, std::ostream &err) {
  try {
    Pipeline pipe = pipeline_from_frame_file(rho_cfg.frame_path, cfg.confidence);
    Adjoint &A = pipe.adjoint();
    if (!rho_cfg.element_json.empty()) {
      if (pipe.lifted()) {
        err << "element input needs a PGL2 spec; lifted embeddings are sampled, use --roundtrip\n";
        return kUsage;
      }
      Element x = pipe.base_element_from_json(rho_cfg.element_json);
      out << matrix3k_json(pipe.field(), A.rho(x)) << "\n";
      return kOk;
    }
    if (rho_cfg.roundtrip > 0) {
      BlackBox &box = pipe.engine().box();
      for (unsigned i = 0; i < rho_cfg.roundtrip; ++i) {
        Element x = box.random();
        Element back = A.rho_inverse(A.rho(x));
        if (!box.eq(back, x)) {
          err << "round trip failed\n";
          return kBudget;
        }
      }
      out << "OK " << rho_cfg.roundtrip << " round trips\n";
      return kOk;
    }
    err << "nothing to do: pass --element or --roundtrip\n";
    return kUsage;
  } catch (const RetryExhausted &ex) {
    err << ex.what() << "\n";
    return kBudget;
  } catch (const std::exception &ex) {
    err << ex.what() << "\n";
    return kUsage;
  }
}

std::vector<BenchRow> run_bench(const GroupSpec &spec, uint64_t seed, unsigned reps) {
  using clock = std::chrono::steady_clock;
  std::vector<BenchRow> rows;
  Pipeline pipe = Pipeline::build(spec, seed);
  Engine &eng = pipe.engine();
  BlackBox &box = eng.box();
  FieldK &K = pipe.field();
  auto counter = box.ops().counter();
  uint64_t q = spec.field.q().fits_u64() ? spec.field.q().as_u64() : 0;
  size_t e_bits = box.exponent().E.bit_length();

  auto measure = [&](const std::string &name, auto &&fn) {
    BenchRow row;
    row.procedure = name;
    row.q = q;
    row.e_bits = e_bits;
    uint64_t m0 = counter->mul.load(), i0 = counter->inv.load(), e0 = counter->eq.load();
    uint64_t a0 = K.add_count(), u0 = K.mul_count();
    auto t0 = clock::now();
    fn();
    auto t1 = clock::now();
    row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    row.leaf_mul = counter->mul.load() - m0;
    row.leaf_inv = counter->inv.load() - i0;
    row.leaf_eq = counter->eq.load() - e0;
    row.k_adds = K.add_count() - a0;
    row.k_muls = K.mul_count() - u0;
    rows.push_back(row);
  };

  const SpinorFrame &f = pipe.frame();
  measure("involution", [&] {
    for (unsigned r = 0; r < reps; ++r)
      eng.find_involution();
  });
  measure("centralizer", [&] {
    for (unsigned r = 0; r < reps; ++r)
      eng.centralizer_of_involution(eng.find_involution());
  });
  measure("reify", [&] {
    // an odd-order j(s,t) forces a reification
    for (unsigned r = 0; r < reps; ++r) {
      for (unsigned tries = 0; tries < 64; ++tries) {
        Element s = eng.find_involution();
        Element t = eng.find_involution();
        if (box.eq(s, t) || has_even_order(box, box.mul(s, t)))
          continue;
        eng.j_of(s, t);
        break;
      }
    }
  });
  Plane &plane = K.plane();
  measure("join", [&] {
    for (unsigned r = 0; r < reps; ++r) {
      Element s = eng.find_involution();
      Element t = eng.find_involution();
      if (!box.eq(s, t))
        plane.join(s, t);
    }
  });
  measure("meet", [&] {
    for (unsigned r = 0; r < reps; ++r) {
      Element a = eng.find_involution();
      Element b = eng.find_involution();
      Element c = eng.find_involution();
      if (box.eq(a, b) || box.eq(a, c) || box.eq(b, c))
        continue;
      PlaneLine k = plane.join(a, b);
      PlaneLine l = plane.join(a, c);
      if (!k.parabolic && !l.parabolic && !box.eq(*k.pole, *l.pole))
        plane.meet(k, l);
    }
  });
  // operands are drawn outside the measured windows so each row counts
  // exactly the operation
  std::vector<FieldElementK> operands;
  for (unsigned r = 0; r < 4 * reps + 4; ++r)
    operands.push_back(K.random_element());
  size_t next_op = 0;
  auto take = [&]() { return operands[next_op++ % operands.size()]; };
  (void)f;
  measure("add", [&] {
    for (unsigned r = 0; r < reps; ++r)
      K.add(take(), take());
  });
  measure("mul", [&] {
    for (unsigned r = 0; r < reps; ++r)
      K.mul(take(), take());
  });
  measure("neg", [&] {
    for (unsigned r = 0; r < reps; ++r)
      K.neg(take());
  });
  measure("inv", [&] {
    for (unsigned r = 0; r < reps; ++r) {
      FieldElementK v = take();
      if (!K.is_zero(v))
        K.inv(v);
    }
  });
  measure("rho", [&] {
    for (unsigned r = 0; r < reps; ++r)
      pipe.adjoint().rho(box.random());
  });
  return rows;
}

std::string bench_csv_header() {
  return "procedure,q,E_bits,wall_ms,leaf_mul,leaf_inv,leaf_eq,k_adds,k_muls";
}

std::string bench_csv_row(const BenchRow &r) {
  std::ostringstream ss;
  ss << r.procedure << ',' << r.q << ',' << r.e_bits << ',' << r.wall_ms << ',' << r.leaf_mul
     << ',' << r.leaf_inv << ',' << r.leaf_eq << ',' << r.k_adds << ',' << r.k_muls;
  return ss.str();
}

int cmd_bench(const RunConfig &cfg, const BenchConfig &bench_cfg, std::ostream &out,
              std::ostream &err) {
  try {
    std::ostringstream csv;
    csv << bench_csv_header() << "\n";
    for (uint64_t p : bench_cfg.primes) {
      GroupSpec spec;
      spec.kind = MatrixKind::PGL2;
      spec.field = ExplicitField::prime(p);
      spec.seed = cfg.seed;
      for (const BenchRow &row : run_bench(spec, cfg.seed, bench_cfg.reps))
        csv << bench_csv_row(row) << "\n";
    }
    write_output(cfg.out_path, csv.str(), out);
    return kOk;
  } catch (const std::exception &ex) {
    err << ex.what() << "\n";
    return kUsage;
  }
}

}  // namespace bbg::cli
