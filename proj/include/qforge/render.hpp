#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qforge/markup.hpp"
#include "qforge/profile.hpp"
#include "qforge/raster.hpp"

namespace qforge {

/// Turns a document into pixels. Implementations must be safe to call
/// concurrently from several generation workers.
class RendererAdapter {
 public:
  virtual ~RendererAdapter() = default;
  virtual std::string name() const = 0;
  virtual Raster render(const DocumentSpec& doc, const FontRegistry& registry) const = 0;
};

/// Procedural stand-in for a real layout engine: a fixed 640x480 white
/// page with one dark rectangle per word, laid out right to left. Glyph
/// height follows each run's font size. Output depends only on the
/// canonical markup of the document.
class MockRenderer final : public RendererAdapter {
 public:
  static constexpr int kWidth = 640;
  static constexpr int kHeight = 480;

  std::string name() const override { return "mock"; }
  Raster render(const DocumentSpec& doc, const FontRegistry& registry) const override;
};

/// Runs `command... markup_file css_file out_png` as a subprocess. The
/// markup file holds the canonical serialization; the stylesheet maps the
/// span attributes onto @font-face rules for the registry's font files.
/// Font files must exist; a missing one is reported by font id.
class ExternalToolchain final : public RendererAdapter {
 public:
  explicit ExternalToolchain(std::vector<std::string> command,
                             std::filesystem::path scratch_dir = std::filesystem::temp_directory_path());

  std::string name() const override { return "external"; }
  Raster render(const DocumentSpec& doc, const FontRegistry& registry) const override;

  const std::vector<std::string>& command() const { return command_; }

 private:
  std::vector<std::string> command_;
  std::filesystem::path scratch_dir_;
};

/// Stylesheet handed to the external toolchain.
std::string make_stylesheet(const DocumentSpec& doc, const FontRegistry& registry);

/// Checks the registry before handing off: it must be non-empty and must
/// know every font the document names. Adapter failures surface as
/// RenderError.
Raster render(const DocumentSpec& doc, const FontRegistry& registry,
              const RendererAdapter& renderer);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace qforge
