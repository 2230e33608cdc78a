#include "cartop/cli/report.hpp"

#include <charconv>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace cartop::cli {

namespace {

bool is_scalar(const Json& j) { return j.is_primitive(); }

bool is_flat(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j) {
    if (is_scalar(e)) continue;
    if (!e.is_array()) return false;
    for (const auto& x : e)
      if (!is_scalar(x)) return false;
  }
  return true;
}

void scalar(std::string& out, const Json& j) {
  switch (j.type()) {
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      break;
    case Json::value_t::string:
      out += j.dump();
      break;
    default:
      out += j.dump();
  }
}

void inline_value(std::string& out, const Json& j) {
  if (j.is_object()) {
    out += '{';
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) out += ", ";
      first = false;
      out += Json(k).dump();
      out += ": ";
      inline_value(out, v);
    }
    out += '}';
  } else if (j.is_array()) {
    out += '[';
    bool first = true;
    for (const auto& v : j) {
      if (!first) out += ", ";
      first = false;
      inline_value(out, v);
    }
    out += ']';
  } else {
    scalar(out, j);
  }
}

void block_value(std::string& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  if (j.is_object() && !j.empty()) {
    out += "{\n";
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      out += Json(k).dump();
      out += ": ";
      block_value(out, v, indent + 2);
    }
    out += '\n';
    out.append(static_cast<std::size_t>(indent), ' ');
    out += '}';
  } else if (j.is_array() && !j.empty() && !is_flat(j)) {
    out += "[\n";
    bool first = true;
    for (const auto& v : j) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      block_value(out, v, indent + 2);
    }
    out += '\n';
    out.append(static_cast<std::size_t>(indent), ' ');
    out += ']';
  } else {
    inline_value(out, j);
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  std::string s(buf, end);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

std::string to_text(const Json& j) {
  std::string out;
  block_value(out, j, 0);
  out += '\n';
  return out;
}

std::string to_line(const Json& j) {
  std::string out;
  inline_value(out, j);
  return out;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_json(const ComplexMatrix& m) {
  Json entries = Json::array();
  for (const auto& z : m.entries()) entries.push_back(complex_json(z));
  return Json{{"dim", m.dim()}, {"entries", std::move(entries)}};
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream hex;
  hex << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) hex << std::setw(2) << static_cast<int>(digest[i]);
  return hex.str();
}

}  // namespace cartop::cli
