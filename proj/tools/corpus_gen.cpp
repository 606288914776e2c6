// Generates the bundled synthetic image corpus. Run once; the outputs are
// committed under assets/corpus so every build sees identical bytes.

#include <cstdio>
#include <filesystem>
#include <string>

#include "uavsem/image.hpp"
#include "uavsem/synthimg.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path out_dir = argc > 1 ? argv[1] : "assets/corpus";
  const int count = argc > 2 ? std::atoi(argv[2]) : 12;
  std::filesystem::create_directories(out_dir);
  for (int i = 0; i < count; ++i) {
    const auto img = uavsem::generate_synthetic_image(1000 + i);
    char name[32];
    std::snprintf(name, sizeof(name), "img_%02d.png", i + 1);
    uavsem::save_png(img, out_dir / name);
    std::printf("wrote %s\n", (out_dir / name).string().c_str());
  }
  return 0;
}
