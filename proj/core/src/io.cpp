#include "rugose/io.hpp"

#include <cstring>
#include <fstream>

#include "rugose/csv.hpp"

namespace rugose {

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::IoError, "cannot open " + path + " for writing");
  os << content;
  if (!os) throw Error(Errc::IoError, "write failed: " + path);
}

void write_field_csv(const std::string& path, const MappedGrid& grid, const Field& f) {
  std::string out = "i,k,x,z,value\n";
  for (int i = 0; i < grid.nx(); ++i)
    for (int k = 0; k < grid.nz(); ++k)
      out += csv_row({csv_num(i), csv_num(k), csv_num(grid.x_center(i)),
                      csv_num(grid.z_phys(i, k)), csv_num(f(i, k))});
  write_text_file(path, out);
}

namespace {

void pack_header(const SnapshotHeader& h, char buf[32]) {
  std::memcpy(buf + 0, &h.magic, 4);
  std::memcpy(buf + 4, &h.version, 2);
  std::memcpy(buf + 6, &h.kind, 2);
  std::memcpy(buf + 8, &h.nx, 4);
  std::memcpy(buf + 12, &h.nz, 4);
  std::memcpy(buf + 16, &h.epsilon, 8);
  std::memcpy(buf + 24, &h.time, 8);
}

SnapshotHeader unpack_header(const char buf[32]) {
  SnapshotHeader h;
  std::memcpy(&h.magic, buf + 0, 4);
  std::memcpy(&h.version, buf + 4, 2);
  std::memcpy(&h.kind, buf + 6, 2);
  std::memcpy(&h.nx, buf + 8, 4);
  std::memcpy(&h.nz, buf + 12, 4);
  std::memcpy(&h.epsilon, buf + 16, 8);
  std::memcpy(&h.time, buf + 24, 8);
  return h;
}

void write_block(std::ofstream& os, const MappedGrid& g, const Field& f) {
  std::vector<double> row(g.nz());
  for (int i = 0; i < g.nx(); ++i) {
    for (int k = 0; k < g.nz(); ++k) row[k] = f(i, k);
    os.write(reinterpret_cast<const char*>(row.data()),
             static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
}

}  // namespace

void write_snapshot(const std::string& path, const MappedGrid& grid, const State& state) {
  SnapshotHeader h;
  h.kind = static_cast<uint16_t>(grid.spec().profile.kind());
  h.nx = static_cast<uint32_t>(grid.nx());
  h.nz = static_cast<uint32_t>(grid.nz());
  h.epsilon = grid.spec().epsilon;
  h.time = state.t;

  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::IoError, "cannot open " + path + " for writing");
  char buf[32];
  pack_header(h, buf);
  os.write(buf, 32);
  write_block(os, grid, state.rho);
  write_block(os, grid, state.m1);
  write_block(os, grid, state.m2);
  write_block(os, grid, state.m3);
  if (!os) throw Error(Errc::IoError, "write failed: " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::IoError, "cannot open " + path);
  char buf[32];
  is.read(buf, 32);
  if (!is) throw Error(Errc::IoError, "truncated snapshot header: " + path);
  Snapshot s;
  s.header = unpack_header(buf);
  if (s.header.magic != SnapshotHeader{}.magic)
    throw Error(Errc::IoError, "bad snapshot magic: " + path);
  const size_t n = static_cast<size_t>(s.header.nx) * s.header.nz;
  for (std::vector<double>* blk : {&s.rho, &s.m1, &s.m2, &s.m3}) {
    blk->resize(n);
    is.read(reinterpret_cast<char*>(blk->data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw Error(Errc::IoError, "truncated snapshot data: " + path);
  }
  return s;
}

std::string series_to_csv(const DiagnosticsSeries& series) {
  std::string out = "t,E,D_cum,D_paper_cum,mass,trace1,trace2,trace3,grad_sq,pressure_fn\n";
  for (const auto& r : series.records)
    out += csv_row({csv_num(r.t), csv_num(r.E), csv_num(r.D_cum), csv_num(r.D_paper_cum),
                    csv_num(r.mass), csv_num(r.trace_sq_u1), csv_num(r.trace_sq_u2),
                    csv_num(r.trace_sq_u3), csv_num(r.grad_sq), csv_num(r.pressure_fn)});
  return out;
}

void write_series_csv(const std::string& path, const DiagnosticsSeries& series) {
  write_text_file(path, series_to_csv(series));
}

}  // namespace rugose
