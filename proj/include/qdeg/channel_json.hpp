// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0
//
// JSON serialization for channels.
//
// Wire format: an object with integer "dim_in" and "dim_out" plus exactly one
// of
//   "kraus": list of dim_out x dim_in matrices, or
//   "choi" : one (dim_out*dim_in) x (dim_out*dim_in) matrix.
// A matrix is a list of rows; each entry is [re, im].

#pragma once

#include <string>

#include "qdeg/channel.hpp"

namespace qdeg {

// Serializes the stored Kraus representation.
std::string channel_to_json(const QuantumChannel& channel);

// Parses either representation; "choi" input is validated and factored.
// Throws IoError on malformed JSON and the construction errors otherwise.
QuantumChannel channel_from_json(const std::string& text);

// File variants. load_channel throws IoError if the file cannot be read.
QuantumChannel load_channel(const std::string& path);
void save_channel(const QuantumChannel& channel, const std::string& path);

// Matrix helpers shared with the CLI output code.
std::string matrix_to_json(const Mat& m);

}  // namespace qdeg
