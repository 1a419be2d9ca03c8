// Copyright 2026 The pesqkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pesq/signal_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include "pesq/error.hpp"

namespace pesq {

static_assert(std::endian::native == std::endian::little,
              "WAV I/O assumes a little-endian host");

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

template <typename T>
T load(const unsigned char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

template <typename T>
void store(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

struct Format {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;
};

Error malformed(const std::filesystem::path& path, const std::string& what) {
  return Error(ErrorCode::kMalformedHeader,
               "malformed RIFF header in " + path.string() + ": " + what);
}

}  // namespace

AudioSignal read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  }
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();

  if (size < 12 || std::memcmp(data, "RIFF", 4) != 0 ||
      std::memcmp(data + 8, "WAVE", 4) != 0) {
    throw malformed(path, "missing RIFF/WAVE signature");
  }

  std::optional<Format> fmt;
  const unsigned char* payload = nullptr;
  std::size_t payload_size = 0;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= size) {
    const unsigned char* id = data + pos;
    std::size_t chunk = load<std::uint32_t>(data + pos + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (chunk < 16 || body + chunk > size) {
        throw malformed(path, "truncated fmt chunk");
      }
      Format f;
      f.tag = load<std::uint16_t>(data + body);
      f.channels = load<std::uint16_t>(data + body + 2);
      f.rate = load<std::uint32_t>(data + body + 4);
      f.bits = load<std::uint16_t>(data + body + 14);
      fmt = f;
    } else if (std::memcmp(id, "data", 4) == 0) {
      if (!fmt) throw malformed(path, "data chunk precedes fmt chunk");
      // Streaming writers leave the size at 0xFFFFFFFF; take what is there.
      chunk = std::min(chunk, size - body);
      payload = data + body;
      payload_size = chunk;
      have_data = true;
      break;
    }
    if (body + chunk > size) throw malformed(path, "chunk overruns file");
    pos = body + chunk + (chunk & 1);
  }

  if (!fmt) throw malformed(path, "no fmt chunk");
  if (!have_data) throw malformed(path, "no data chunk");

  const bool pcm16 = fmt->tag == kFormatPcm && fmt->bits == 16;
  const bool float32 = fmt->tag == kFormatFloat && fmt->bits == 32;
  if (!pcm16 && !float32) {
    throw Error(ErrorCode::kUnsupportedCodec,
                "unsupported codec in " + path.string() + " (format tag " +
                    std::to_string(fmt->tag) + ", " +
                    std::to_string(fmt->bits) +
                    " bits); only PCM16 and float32 are accepted");
  }
  if (fmt->channels < 1 || fmt->channels > kMaxChannels) {
    throw Error(ErrorCode::kUnsupportedChannels,
                path.string() + " has " + std::to_string(fmt->channels) +
                    " channels; 1 to " + std::to_string(kMaxChannels) +
                    " are accepted");
  }
  if (fmt->rate == 0) throw malformed(path, "zero sample rate");

  const std::size_t width = fmt->bits / 8;
  const std::size_t frames = payload_size / (width * fmt->channels);
  if (frames == 0) {
    throw Error(ErrorCode::kEmptyData,
                "zero-length data chunk in " + path.string());
  }

  Eigen::ArrayXXd samples(frames, fmt->channels);
  const unsigned char* p = payload;
  for (std::size_t i = 0; i < frames; ++i) {
    for (int c = 0; c < fmt->channels; ++c, p += width) {
      samples(i, c) = pcm16 ? static_cast<double>(load<std::int16_t>(p))
                            : static_cast<double>(load<float>(p)) * 32768.0;
    }
  }
  return AudioSignal(std::move(samples), static_cast<int>(fmt->rate));
}

void write_wav(const std::filesystem::path& path, const AudioSignal& signal,
               WavEncoding encoding) {
  const bool pcm16 = encoding == WavEncoding::kPcm16;
  const std::uint16_t channels = static_cast<std::uint16_t>(signal.channels());
  const std::uint16_t width = pcm16 ? 2 : 4;
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(signal.frames() * channels * width);

  std::string out;
  out.reserve(44 + data_bytes);
  out.append("RIFF");
  store<std::uint32_t>(out, 36 + data_bytes);
  out.append("WAVEfmt ");
  store<std::uint32_t>(out, 16);
  store<std::uint16_t>(out, pcm16 ? kFormatPcm : kFormatFloat);
  store<std::uint16_t>(out, channels);
  store<std::uint32_t>(out, static_cast<std::uint32_t>(signal.rate()));
  store<std::uint32_t>(out, static_cast<std::uint32_t>(signal.rate()) *
                                channels * width);
  store<std::uint16_t>(out, static_cast<std::uint16_t>(channels * width));
  store<std::uint16_t>(out, static_cast<std::uint16_t>(width * 8));
  out.append("data");
  store<std::uint32_t>(out, data_bytes);

  const auto& s = signal.samples();
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index c = 0; c < s.cols(); ++c) {
      if (pcm16) {
        const double v = std::clamp(std::nearbyint(s(i, c)), -32768.0, 32767.0);
        store<std::int16_t>(out, static_cast<std::int16_t>(v));
      } else {
        store<float>(out, static_cast<float>(s(i, c) / 32768.0));
      }
    }
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
}

AudioSignal downmix_mono(const AudioSignal& signal) {
  return AudioSignal::mono(signal.samples().rowwise().mean(), signal.rate());
}

AudioSignal interleave(const AudioSignal& signal) {
  if (signal.channels() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "interleave needs at least two channels");
  }
  // Column-major transpose flattens to ch0[0], ch1[0], ch0[1], ...
  const Eigen::ArrayXXd t = signal.samples().transpose();
  return AudioSignal::mono(Eigen::Map<const Eigen::ArrayXd>(t.data(), t.size()),
                           signal.rate());
}

std::vector<AudioSignal> split_channels(const AudioSignal& signal) {
  std::vector<AudioSignal> out;
  out.reserve(signal.channels());
  for (Eigen::Index c = 0; c < signal.channels(); ++c) {
    out.push_back(AudioSignal::mono(signal.channel(c), signal.rate()));
  }
  return out;
}

AudioSignal join_channels(const std::vector<AudioSignal>& channels) {
  if (channels.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "nothing to join");
  }
  const Eigen::Index frames = channels.front().frames();
  const int rate = channels.front().rate();
  Eigen::Index total = 0;
  for (const auto& ch : channels) {
    if (ch.frames() != frames) {
      throw Error(ErrorCode::kChannelMismatch, "channel lengths differ");
    }
    if (ch.rate() != rate) {
      throw Error(ErrorCode::kRateMismatch, "channel rates differ");
    }
    total += ch.channels();
  }
  Eigen::ArrayXXd samples(frames, total);
  Eigen::Index col = 0;
  for (const auto& ch : channels) {
    samples.middleCols(col, ch.channels()) = ch.samples();
    col += ch.channels();
  }
  return AudioSignal(std::move(samples), rate);
}

void validate_for_scoring(const AudioSignal& signal) {
  if (signal.rate() != 8000 && signal.rate() != 16000) {
    throw Error(ErrorCode::kUnsupportedRate,
                "sample rate " + std::to_string(signal.rate()) +
                    " Hz is not supported; resample to 8000 or 16000 Hz first");
  }
  if (signal.duration() < kMinDuration) {
    throw Error(ErrorCode::kTooShort, "signal shorter than 0.25 s");
  }
  if (signal.duration() > kMaxDuration) {
    throw Error(ErrorCode::kTooLong, "signal longer than 64 s");
  }
}

}  // namespace pesq
