// Runs every acceptance suite on its default fixtures and prints one verdict
// line per criterion. Optional arguments restrict the run to the listed ids.
#include <iostream>
#include <thread>

#include "mlcx/harness.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> ids = mlcx::suite_ids();
  if (argc > 1) ids.assign(argv + 1, argv + argc);
  mlcx::SuiteConfig cfg;
  cfg.jobs = static_cast<int>(std::max(2u, std::thread::hardware_concurrency()));
  int failed = 0;
  for (auto& id : ids) {
    mlcx::SuiteReport r;
    try {
      r = mlcx::run_suite(id, "default", cfg);
    } catch (const std::exception& e) {
      r.suite = id;
      r.fail({"", "", e.what(), ""});
    }
    std::cout << r.summary() << "  (" << static_cast<long>(r.elapsed_ms) << " ms)\n";
    for (std::size_t i = 0; i < r.failures.size() && i < 5; ++i)
      std::cout << "    " << r.failures[i].detail << (r.failures[i].term.empty() ? "" : "  term: " + r.failures[i].term) << "\n";
    for (auto& n : r.notes) std::cout << "    note: " << n << "\n";
    std::cout.flush();
    if (!r.pass()) ++failed;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << "\n";
  return failed ? 1 : 0;
}
