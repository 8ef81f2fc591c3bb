#include "sbnn/training.hpp"

#include <cstdio>
#include <fstream>

namespace sbnn {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_history_csv(const std::string& path,
                       const std::vector<EpochRecord>& history) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "epoch,j_train,j_train_avg_w2,j_val,gamma_used,wall_time_s\n";
  for (const EpochRecord& r : history) {
    out << r.epoch << ',' << format_double(r.j_train) << ','
        << format_double(r.j_train_avg_w2) << ',' << format_double(r.j_val)
        << ',' << format_double(r.gamma_used) << ','
        << format_double(r.wall_time_s) << '\n';
  }
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace sbnn
