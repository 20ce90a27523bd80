#include <cpkit/cli.hpp>

int main(int argc, char** argv) {
  return cpkit::cli::run(argc, argv);
}
