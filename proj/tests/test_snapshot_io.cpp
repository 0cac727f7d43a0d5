#include "shadowboot/snapshot_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace shadowboot;

namespace {

ShadowSet read_text(const std::string &text) {
  std::istringstream is(text);
  return read_snapshots(is);
}

std::size_t error_line(const std::string &text) {
  try {
    read_text(text);
  } catch (const SnapshotFormatError &e) {
    return e.line();
  }
  return 0;
}

} // namespace

TEST(SnapshotIo, RoundTrip) {
  const auto state = run_circuit(build_ansatz_circuit(4, draw_theta(4, 2)));
  const ShadowSet sh = sample_shadow(state, 300, 77);
  std::ostringstream os;
  write_snapshots(os, sh);
  EXPECT_EQ(read_text(os.str()), sh);

  ShadowSet no_seed = sh;
  no_seed.seed.reset();
  std::ostringstream os2;
  write_snapshots(os2, no_seed);
  EXPECT_EQ(read_text(os2.str()), no_seed);
}

TEST(SnapshotIo, Format) {
  ShadowSet sh{3, {{{Axis::X, Axis::Y, Axis::Z}, {0, 1, 1}}}, 5};
  std::ostringstream os;
  write_snapshots(os, sh);
  EXPECT_EQ(os.str(), "# n_qubits=3 ensemble=pauli seed=5\nXYZ 011\n");
}

TEST(SnapshotIo, CommentsBlankLinesAndCrlf) {
  const auto sh = read_text("\n# n_qubits=2 ensemble=pauli\r\n\nXZ 10\r\n# note\nYY 00\n");
  ASSERT_EQ(sh.size(), 2u);
  EXPECT_EQ(sh.snapshots[0].bases[1], Axis::Z);
  EXPECT_EQ(sh.snapshots[0].outcomes[0], 1);
  EXPECT_FALSE(sh.seed);
}

TEST(SnapshotIo, ErrorsNameTheLine) {
  const std::string head = "# n_qubits=2 ensemble=pauli\n";
  EXPECT_EQ(error_line(head + "XZ 10\nXYZ 101\n"), 3u);
  EXPECT_EQ(error_line(head + "XQ 10\n"), 2u);
  EXPECT_EQ(error_line(head + "XZ 12\n"), 2u);
  EXPECT_EQ(error_line(head + "XZ\n"), 2u);
  EXPECT_EQ(error_line(head + "XZ 10 extra\n"), 2u);
  EXPECT_EQ(error_line("XZ 10\n"), 1u);
  EXPECT_EQ(error_line("# n_qubits=2 ensemble=clifford\nXZ 10\n"), 1u);
  EXPECT_EQ(error_line("# ensemble=pauli\nXZ 10\n"), 1u);
  EXPECT_EQ(error_line("# n_qubits=two ensemble=pauli\n"), 1u);
  EXPECT_THROW(read_text(""), SnapshotFormatError);
  EXPECT_THROW(read_text(head), SnapshotFormatError);
}

TEST(SnapshotIo, FileErrorsIncludePath) {
  const std::filesystem::path dir = SHADOWBOOT_TEST_TMP;
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "bad_snapshots.txt").string();
  std::ofstream(path) << "# n_qubits=1 ensemble=pauli\nX 0\nX 01\n";
  try {
    read_snapshots_file(path);
    FAIL() << "expected SnapshotFormatError";
  } catch (const SnapshotFormatError &e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find(path + ":line 3"), std::string::npos);
  }
  EXPECT_THROW(read_snapshots_file((dir / "missing.txt").string()), std::runtime_error);
}
