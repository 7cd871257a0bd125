#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sfw/text_pipeline.hpp"

namespace sfw {

// A record stream that can be scanned more than once. Tree construction
// scans twice; every scan must yield the same records in the same order.
class RecordSource {
 public:
  using Visitor = std::function<void(const SpatialSocialRecord&)>;

  virtual ~RecordSource() = default;
  virtual void scan(const Visitor& visit) = 0;
};

class SpanRecordSource : public RecordSource {
 public:
  explicit SpanRecordSource(std::span<const SpatialSocialRecord> records)
      : records_(records) {}

  void scan(const Visitor& visit) override {
    for (const auto& r : records_) visit(r);
  }

 private:
  std::span<const SpatialSocialRecord> records_;
};

}  // namespace sfw
