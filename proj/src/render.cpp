#include "qforge/render.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "qforge/error.hpp"
#include "qforge/rng.hpp"

extern char** environ;

namespace qforge {

namespace {

constexpr int kDefaultSizePx = 18;

std::size_t base_length(std::u32string_view word) {
  return static_cast<std::size_t>(
      std::count_if(word.begin(), word.end(), [](char32_t c) { return !is_tashkeel(c); }));
}

void fill_rect(Raster& r, int x0, int y0, int x1, int y1, std::uint8_t shade) {
  x0 = std::max(x0, 0), y0 = std::max(y0, 0);
  x1 = std::min(x1, r.width), y1 = std::min(y1, r.height);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) {
      const std::size_t i = r.index(x, y);
      r.pixels[i] = r.pixels[i + 1] = r.pixels[i + 2] = shade;
    }
}

std::string read_tail(const std::filesystem::path& p, std::size_t max_bytes) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  if (s.size() > max_bytes) s = "..." + s.substr(s.size() - max_bytes);
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : " ") + p;
  return out;
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Raster MockRenderer::render(const DocumentSpec& doc, const FontRegistry&) const {
  Rng rng(fnv1a(serialize_markup(doc)));
  Raster page(kWidth, kHeight, 255);
  const int margin = 24;
  int y = margin;

  for (const Block& block : doc.blocks) {
    int line_h = 0;
    int right = kWidth - margin;
    for (const Run& run : block.runs) {
      const int size = run.style ? run.style->size_px : kDefaultSizePx;
      const int glyph_h = std::max(3, size * 9 / 20);
      line_h = std::max(line_h, size);
      const auto shade = static_cast<std::uint8_t>(rng.uniform_int(0, 40));

      std::u32string_view rest = run.text.codepoints();
      while (!rest.empty()) {
        const std::size_t cut = std::min(rest.find(U' '), rest.size());
        const std::u32string_view word = rest.substr(0, cut);
        rest.remove_prefix(std::min(cut + 1, rest.size()));

        const int jitter = static_cast<int>(rng.uniform_int(0, glyph_h / 3));
        const int w = std::max(2, static_cast<int>(base_length(word)) * glyph_h * 11 / 20 + jitter);
        if (right - w < margin && right != kWidth - margin) {
          y += line_h;
          right = kWidth - margin;
        }
        const int top = y + (line_h - glyph_h);
        if (top >= kHeight - margin) return page;
        fill_rect(page, std::max(right - w, margin), top, right, top + glyph_h, shade);
        right -= w + std::max(2, glyph_h * 3 / 5);
      }
    }
    y += line_h + line_h / 2;
    if (y >= kHeight - margin) break;
  }
  return page;
}

ExternalToolchain::ExternalToolchain(std::vector<std::string> command,
                                     std::filesystem::path scratch_dir)
    : command_(std::move(command)), scratch_dir_(std::move(scratch_dir)) {
  if (command_.empty()) throw ConfigError("external renderer command is empty");
}

std::string make_stylesheet(const DocumentSpec& doc, const FontRegistry& registry) {
  std::set<std::string> fonts;
  std::set<int> sizes;
  for (const auto& block : doc.blocks)
    for (const auto& run : block.runs)
      if (run.style) {
        fonts.insert(run.style->font_id);
        sizes.insert(run.style->size_px);
      }

  std::ostringstream css;
  for (const auto& id : fonts) {
    css << "@font-face { font-family: \"qf-" << id << "\"; src: url(\"file://"
        << registry.resolve_file(id).string() << "\"); }\n";
  }
  css << "html, body { background: #ffffff; color: #000000; margin: 0; }\n"
      << "body { direction: rtl; padding: 24px; }\n"
      << "p.annotation { color: #202020; }\n";
  for (const auto& id : fonts)
    css << "span[font-family=\"" << id << "\"] { font-family: \"qf-" << id << "\"; }\n";
  for (int s : sizes) css << "span[font-size=\"" << s << "\"] { font-size: " << s << "px; }\n";
  return css.str();
}

Raster ExternalToolchain::render(const DocumentSpec& doc, const FontRegistry& registry) const {
  for (const auto& block : doc.blocks)
    for (const auto& run : block.runs) {
      if (!run.style) continue;
      const auto file = registry.resolve_file(run.style->font_id);
      if (!std::filesystem::exists(file))
        throw RenderError("font '" + run.style->font_id + "' file not found: " + file.string());
    }

  static std::atomic<std::uint64_t> counter{0};
  const auto job = scratch_dir_ / ("qforge-render-" + std::to_string(::getpid()) + "-" +
                                   std::to_string(counter.fetch_add(1)));
  std::error_code ec;
  std::filesystem::create_directories(job, ec);
  if (ec) throw RenderError("cannot create scratch directory " + job.string() + ": " + ec.message());

  struct Cleanup {
    std::filesystem::path dir;
    ~Cleanup() {
      std::error_code ignored;
      std::filesystem::remove_all(dir, ignored);
    }
  } cleanup{job};

  const auto markup_file = job / "page.html";
  const auto css_file = job / "page.css";
  const auto png_file = job / "page.png";
  const auto log_file = job / "renderer.log";
  {
    std::ofstream(markup_file, std::ios::binary) << serialize_markup(doc) << '\n';
    std::ofstream(css_file, std::ios::binary) << make_stylesheet(doc, registry);
  }

  std::vector<std::string> args = command_;
  args.push_back(markup_file.string());
  args.push_back(css_file.string());
  args.push_back(png_file.string());
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, log_file.c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_adddup2(&actions, STDOUT_FILENO, STDERR_FILENO);

  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0)
    throw RenderError("cannot start renderer '" + command_.front() + "': " + std::strerror(rc));

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw RenderError("waitpid failed for renderer '" + join(command_) + "'");
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    const std::string how = WIFEXITED(status)
                                ? "exited with status " + std::to_string(WEXITSTATUS(status))
                                : "was terminated by a signal";
    throw RenderError("renderer '" + join(command_) + "' " + how + ": " + read_tail(log_file, 600));
  }

  try {
    return read_png(png_file);
  } catch (const IoError& e) {
    throw RenderError(std::string("renderer produced no usable image: ") + e.what());
  }
}

Raster render(const DocumentSpec& doc, const FontRegistry& registry,
              const RendererAdapter& renderer) {
  if (registry.empty()) throw RenderError("font registry is empty");
  for (const auto& block : doc.blocks)
    for (const auto& run : block.runs)
      if (run.style && !registry.contains(run.style->font_id))
        throw RenderError("font '" + run.style->font_id + "' is not in the registry");

  Raster r;
  try {
    r = renderer.render(doc, registry);
  } catch (const RenderError&) {
    throw;
  } catch (const std::exception& e) {
    throw RenderError(renderer.name() + " renderer failed: " + e.what());
  }
  if (!r.valid()) throw RenderError(renderer.name() + " renderer returned an invalid raster");
  return r;
}

}  // namespace qforge
