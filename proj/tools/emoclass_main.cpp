// CLI entry point; subcommands are wired up as the library lands.
#include <cstdio>

int main() {
  std::puts("emoclass: no subcommands wired yet");
  return 1;
}
