#pragma once

// KeyValueConfig <-> domain config structs (channel, acquisition, signal).
// Used by the CLI sidecars and by anything regenerating artifacts from them.

#include "mwprec/channel.hpp"
#include "mwprec/config.hpp"
#include "mwprec/dataset.hpp"

namespace mwprec {

void channel_to_config(const ChannelModel& m, KeyValueConfig& cfg);
ChannelModel channel_from_config(const KeyValueConfig& cfg);

void acquisition_to_config(const AcquisitionConfig& a, KeyValueConfig& cfg);
AcquisitionConfig acquisition_from_config(const KeyValueConfig& cfg);

void signal_to_config(const SignalConfig& s, KeyValueConfig& cfg);
SignalConfig signal_from_config(const KeyValueConfig& cfg);

// Waveform CSV interchange: header "index,amplitude", one sample per row.
void save_waveform_csv(const std::string& path, const std::vector<double>& samples);
std::vector<double> load_waveform_csv(const std::string& path);

} // namespace mwprec
