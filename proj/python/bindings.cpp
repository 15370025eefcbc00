// Copyright (c) 2026 The fairsv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fairsv/embeddings.hpp"
#include "fairsv/error.hpp"
#include "fairsv/features.hpp"
#include "fairsv/manifest.hpp"
#include "fairsv/metrics.hpp"
#include "fairsv/random.hpp"
#include "fairsv/report.hpp"
#include "fairsv/scoring.hpp"
#include "fairsv/splits.hpp"
#include "fairsv/synth.hpp"
#include "fairsv/trials.hpp"
#include "fairsv/version.hpp"
#include "fairsv/wav.hpp"

namespace py = pybind11;
using namespace fairsv;

PYBIND11_MODULE(_fairsv, m) {
  m.doc() =
      "Fairness benchmarking for speaker verification: demographic "
      "grouping, balanced splits, trial protocols, cosine scoring and "
      "group-sliced error metrics.";
  m.attr("__version__") = FAIRSV_VERSION;

  py::register_exception<Error>(m, "FairsvError");

  // --- enums ----------------------------------------------------------------

  py::enum_<Gender>(m, "Gender")
      .value("FEMALE", Gender::kFemale)
      .value("MALE", Gender::kMale);
  py::enum_<AgeBucket>(m, "AgeBucket")
      .value("YOUNG", AgeBucket::kYoung)
      .value("OLD", AgeBucket::kOld);
  py::enum_<TrainRecipe>(m, "TrainRecipe")
      .value("USER_BALANCED", TrainRecipe::kUserBalanced)
      .value("UNBALANCED", TrainRecipe::kUnbalanced)
      .value("UTTERANCE_BALANCED", TrainRecipe::kUtteranceBalanced);
  py::enum_<TestMode>(m, "TestMode")
      .value("SAME_AGE", TestMode::kSameAge)
      .value("SAME_GENDER", TestMode::kSameGender)
      .value("RANDOM", TestMode::kRandom);
  py::enum_<FeatureKind>(m, "FeatureKind")
      .value("SPECTROGRAM", FeatureKind::kSpectrogram)
      .value("LOGMEL", FeatureKind::kLogMel);
  py::enum_<EmbeddingSource>(m, "EmbeddingSource")
      .value("BASELINE", EmbeddingSource::kBaseline)
      .value("EXTERNAL", EmbeddingSource::kExternal)
      .value("SYNTHETIC", EmbeddingSource::kSynthetic);
  py::enum_<TableFormat>(m, "TableFormat")
      .value("CSV", TableFormat::kCsv)
      .value("MARKDOWN", TableFormat::kMarkdown);

  // --- manifest -------------------------------------------------------------

  py::class_<GroupKey>(m, "GroupKey")
      .def(py::init([](std::string language, Gender gender, AgeBucket bucket) {
             return GroupKey{std::move(language), gender, bucket};
           }),
           py::arg("language"), py::arg("gender"), py::arg("bucket"))
      .def_readwrite("language", &GroupKey::language)
      .def_readwrite("gender", &GroupKey::gender)
      .def_readwrite("bucket", &GroupKey::bucket)
      .def("label", &GroupKey::label)
      .def("__eq__",
           [](const GroupKey& a, const GroupKey& b) { return a == b; })
      .def("__lt__", [](const GroupKey& a, const GroupKey& b) { return a < b; })
      .def("__hash__",
           [](const GroupKey& k) {
             return py::hash(py::make_tuple(k.language, static_cast<int>(k.gender),
                                            static_cast<int>(k.bucket)));
           })
      .def("__repr__",
           [](const GroupKey& k) { return "GroupKey(" + k.label() + ")"; });

  py::class_<UtteranceRef>(m, "UtteranceRef")
      .def(py::init([](std::string utterance_id, std::string audio_path) {
             return UtteranceRef{std::move(utterance_id), std::move(audio_path)};
           }),
           py::arg("utterance_id"), py::arg("audio_path") = "")
      .def_readwrite("utterance_id", &UtteranceRef::utterance_id)
      .def_readwrite("audio_path", &UtteranceRef::audio_path);

  py::class_<SpeakerRecord>(m, "SpeakerRecord")
      .def(py::init([](std::string speaker_id, std::string language,
                       Gender gender, int age_years,
                       std::vector<UtteranceRef> utterances) {
             return SpeakerRecord{std::move(speaker_id), std::move(language),
                                  gender, age_years, std::move(utterances)};
           }),
           py::arg("speaker_id"), py::arg("language"), py::arg("gender"),
           py::arg("age_years"), py::arg("utterances"))
      .def_readwrite("speaker_id", &SpeakerRecord::speaker_id)
      .def_readwrite("language", &SpeakerRecord::language)
      .def_readwrite("gender", &SpeakerRecord::gender)
      .def_readwrite("age_years", &SpeakerRecord::age_years)
      .def_readwrite("utterances", &SpeakerRecord::utterances);

  py::class_<DatasetIndex>(m, "DatasetIndex")
      .def_readonly("records", &DatasetIndex::records)
      .def_readonly("group_index", &DatasetIndex::group_index)
      .def_readonly("split_age", &DatasetIndex::split_age)
      .def("speaker", &DatasetIndex::speaker, py::arg("speaker_id"),
           py::return_value_policy::reference_internal)
      .def("contains", &DatasetIndex::contains, py::arg("speaker_id"))
      .def("languages", &DatasetIndex::languages)
      .def("total_utterances", &DatasetIndex::total_utterances)
      .def("__len__",
           [](const DatasetIndex& idx) { return idx.records.size(); });

  py::class_<ManifestOptions>(m, "ManifestOptions")
      .def(py::init<>())
      .def_readwrite("delimiter", &ManifestOptions::delimiter)
      .def_readwrite("split_age", &ManifestOptions::split_age);

  m.def("load_manifest", &load_manifest, py::arg("manifest_path"),
        py::arg("language"), py::arg("options") = ManifestOptions{});
  m.def("build_index", &build_index, py::arg("records"),
        py::arg("split_age") = 40);
  m.def("merge_indexes", &merge_indexes, py::arg("indexes"));
  m.def("filter_min_utterances", &filter_min_utterances, py::arg("index"),
        py::arg("min_count") = 5);
  m.def("assign_group", &assign_group, py::arg("record"),
        py::arg("split_age") = 40);
  m.def("group_counts", &group_counts, py::arg("index"));

  // --- splits ---------------------------------------------------------------

  py::class_<SplitConfig>(m, "SplitConfig")
      .def(py::init<>())
      .def_readwrite("seed", &SplitConfig::seed)
      .def_readwrite("test_users_per_group", &SplitConfig::test_users_per_group)
      .def_readwrite("n_folds", &SplitConfig::n_folds)
      .def_readwrite("split_age", &SplitConfig::split_age);

  py::class_<TestRoster>(m, "TestRoster")
      .def(py::init<>())
      .def_readwrite("fold_id", &TestRoster::fold_id)
      .def_readwrite("members", &TestRoster::members)
      .def("size", &TestRoster::size)
      .def("speakers", &TestRoster::speakers)
      .def("languages", &TestRoster::languages)
      .def("contains", &TestRoster::contains, py::arg("speaker_id"))
      .def("for_language", &TestRoster::for_language, py::arg("language"))
      .def("__len__", [](const TestRoster& r) { return r.size(); });

  py::class_<TrainItem>(m, "TrainItem")
      .def_readonly("speaker_id", &TrainItem::speaker_id)
      .def_readonly("utterance_id", &TrainItem::utterance_id)
      .def_readonly("group", &TrainItem::group);

  py::class_<TrainSplit>(m, "TrainSplit")
      .def_readonly("recipe", &TrainSplit::recipe)
      .def_readonly("languages", &TrainSplit::languages)
      .def_readonly("items", &TrainSplit::items)
      .def("speakers", &TrainSplit::speakers)
      .def("__len__", [](const TrainSplit& s) { return s.items.size(); });

  m.def("select_test_roster", &select_test_roster, py::arg("index"),
        py::arg("config"), py::arg("fold") = 0);
  m.def("build_train_user_balanced", &build_train_user_balanced,
        py::arg("index"), py::arg("roster"), py::arg("config"));
  m.def("build_train_unbalanced", &build_train_unbalanced, py::arg("index"),
        py::arg("roster"));
  m.def("build_train_utterance_balanced", &build_train_utterance_balanced,
        py::arg("index"), py::arg("roster"), py::arg("config"));
  m.def("merge_language_splits", &merge_language_splits, py::arg("splits"));
  m.def("serialize_split", &serialize_split, py::arg("split"),
        py::arg("delimiter") = ',');
  m.def("parse_split_items", &parse_split_items, py::arg("text"),
        py::arg("delimiter") = ',');
  m.def("serialize_roster", &serialize_roster, py::arg("roster"),
        py::arg("delimiter") = ',');
  m.def("parse_roster", &parse_roster, py::arg("text"), py::arg("fold_id") = 0,
        py::arg("delimiter") = ',');

  // --- trials ---------------------------------------------------------------

  py::class_<TrialPair>(m, "TrialPair")
      .def(py::init([](std::int64_t pair_id, std::string enroll_speaker,
                       std::string enroll_utt, std::string probe_speaker,
                       std::string probe_utt, int label, GroupKey group) {
             return TrialPair{pair_id,
                              std::move(enroll_speaker),
                              std::move(enroll_utt),
                              std::move(probe_speaker),
                              std::move(probe_utt),
                              label,
                              std::move(group)};
           }),
           py::arg("pair_id"), py::arg("enroll_speaker"),
           py::arg("enroll_utt"), py::arg("probe_speaker"),
           py::arg("probe_utt"), py::arg("label"), py::arg("group"))
      .def_readwrite("pair_id", &TrialPair::pair_id)
      .def_readwrite("enroll_speaker", &TrialPair::enroll_speaker)
      .def_readwrite("enroll_utt", &TrialPair::enroll_utt)
      .def_readwrite("probe_speaker", &TrialPair::probe_speaker)
      .def_readwrite("probe_utt", &TrialPair::probe_utt)
      .def_readwrite("label", &TrialPair::label)
      .def_readwrite("group", &TrialPair::group);

  py::class_<TrialFile>(m, "TrialFile")
      .def_readonly("mode", &TrialFile::mode)
      .def_readonly("fold_id", &TrialFile::fold_id)
      .def_readonly("language", &TrialFile::language)
      .def_readonly("n_same", &TrialFile::n_same)
      .def_readonly("n_diff", &TrialFile::n_diff)
      .def_readonly("pairs", &TrialFile::pairs)
      .def("__len__", [](const TrialFile& f) { return f.pairs.size(); });

  m.def("gen_trials", &gen_trials, py::arg("roster"), py::arg("index"),
        py::arg("mode"), py::arg("n_same") = 64, py::arg("n_diff") = 64,
        py::arg("seed") = 0);
  m.def("validate_trials", &validate_trials, py::arg("file"), py::arg("roster"),
        py::arg("index"));
  m.def("serialize_trials", &serialize_trials, py::arg("file"),
        py::arg("delimiter") = ',');
  m.def("parse_trials", &parse_trials, py::arg("text"), py::arg("mode"),
        py::arg("fold_id") = 0, py::arg("n_same") = 64, py::arg("n_diff") = 64,
        py::arg("delimiter") = ',');

  // --- acoustic -------------------------------------------------------------

  py::class_<Waveform>(m, "Waveform")
      .def(py::init([](std::vector<double> samples, int sample_rate) {
             return Waveform{std::move(samples), sample_rate};
           }),
           py::arg("samples"), py::arg("sample_rate") = kTargetSampleRate)
      .def_readwrite("samples", &Waveform::samples)
      .def_readwrite("sample_rate", &Waveform::sample_rate)
      .def("__len__", [](const Waveform& w) { return w.samples.size(); });

  py::class_<FeatureConfig>(m, "FeatureConfig")
      .def(py::init<>())
      .def_readwrite("window_ms", &FeatureConfig::window_ms)
      .def_readwrite("hop_ms", &FeatureConfig::hop_ms)
      .def_readwrite("fft_size", &FeatureConfig::fft_size)
      .def_readwrite("n_mels", &FeatureConfig::n_mels)
      .def_readwrite("fmin_hz", &FeatureConfig::fmin_hz)
      .def_readwrite("fmax_hz", &FeatureConfig::fmax_hz)
      .def_readwrite("log_floor", &FeatureConfig::log_floor);

  py::class_<FeatureMatrix>(m, "FeatureMatrix")
      .def_readonly("kind", &FeatureMatrix::kind)
      .def_readonly("frames", &FeatureMatrix::frames)
      .def_readonly("bins", &FeatureMatrix::bins)
      .def_property_readonly("array",
                             [](const FeatureMatrix& f) {
                               return py::array_t<double>(
                                   {f.frames, f.bins}, f.data.data());
                             })
      .def("__len__", [](const FeatureMatrix& f) { return f.frames; });

  m.def("load_wav", &load_wav, py::arg("path"));
  m.def("resample_linear", &resample_linear, py::arg("wave"),
        py::arg("target_rate"));
  m.def("write_wav_pcm16", &write_wav_pcm16, py::arg("path"), py::arg("wave"));
  m.def("frame_count", &frame_count, py::arg("n_samples"),
        py::arg("window_samples"), py::arg("hop_samples"));
  m.def("spectrogram", &spectrogram, py::arg("wave"),
        py::arg("config") = FeatureConfig{});
  m.def("logmel", &logmel, py::arg("wave"), py::arg("config") = FeatureConfig{});
  m.def("baseline_embed", &baseline_embed, py::arg("features"));

  // --- embeddings -----------------------------------------------------------

  py::class_<Embedding>(m, "Embedding")
      .def(py::init([](std::vector<double> values, EmbeddingSource source) {
             return Embedding{std::move(values), source};
           }),
           py::arg("values"), py::arg("source") = EmbeddingSource::kExternal)
      .def_readwrite("values", &Embedding::values)
      .def_readwrite("source", &Embedding::source)
      .def("dim", &Embedding::dim)
      .def("__len__", [](const Embedding& e) { return e.dim(); });

  py::class_<EmbeddingStore>(m, "EmbeddingStore")
      .def(py::init<>())
      .def("insert", &EmbeddingStore::insert, py::arg("speaker_id"),
           py::arg("utterance_id"), py::arg("embedding"))
      .def("lookup", &EmbeddingStore::lookup, py::arg("speaker_id"),
           py::arg("utterance_id"), py::return_value_policy::reference_internal)
      .def("contains", &EmbeddingStore::contains, py::arg("speaker_id"),
           py::arg("utterance_id"))
      .def("dim", &EmbeddingStore::dim)
      .def("keys",
           [](const EmbeddingStore& s) {
             std::vector<std::pair<std::string, std::string>> keys;
             keys.reserve(s.size());
             for (const auto& [key, e] : s.entries()) keys.push_back(key);
             return keys;
           })
      .def("__len__", [](const EmbeddingStore& s) { return s.size(); });

  m.def("import_embeddings", &import_embeddings, py::arg("path"),
        py::arg("delimiter") = ',');
  m.def("parse_embeddings", &parse_embeddings, py::arg("text"),
        py::arg("delimiter") = ',',
        py::arg("source") = EmbeddingSource::kExternal);
  m.def("serialize_embeddings", &serialize_embeddings, py::arg("store"),
        py::arg("delimiter") = ',');

  // --- scoring --------------------------------------------------------------

  py::class_<ScoreRecord>(m, "ScoreRecord")
      .def(py::init([](std::int64_t pair_id, int label, double similarity,
                       GroupKey group, std::optional<int> epoch) {
             return ScoreRecord{pair_id, label, similarity, std::move(group),
                                epoch};
           }),
           py::arg("pair_id"), py::arg("label"), py::arg("similarity"),
           py::arg("group"), py::arg("epoch") = std::nullopt)
      .def_readwrite("pair_id", &ScoreRecord::pair_id)
      .def_readwrite("label", &ScoreRecord::label)
      .def_readwrite("similarity", &ScoreRecord::similarity)
      .def_readwrite("group", &ScoreRecord::group)
      .def_readwrite("epoch", &ScoreRecord::epoch);

  py::class_<ScoreProvenance>(m, "ScoreProvenance")
      .def_readwrite("train_split_id", &ScoreProvenance::train_split_id)
      .def_readwrite("trial_file_id", &ScoreProvenance::trial_file_id)
      .def_readwrite("embedding_source", &ScoreProvenance::embedding_source);

  py::class_<ScoreFile>(m, "ScoreFile")
      .def(py::init<>())
      .def_readwrite("records", &ScoreFile::records)
      .def_readwrite("provenance", &ScoreFile::provenance)
      .def("__len__", [](const ScoreFile& f) { return f.records.size(); });

  m.def("cosine", &cosine, py::arg("a"), py::arg("b"));
  m.def("score_trials", &score_trials, py::arg("trials"), py::arg("store"),
        py::arg("epoch") = std::nullopt);
  m.def("serialize_scores", &serialize_scores, py::arg("file"),
        py::arg("delimiter") = ',');
  m.def("parse_scores", &parse_scores, py::arg("text"),
        py::arg("delimiter") = ',');

  // --- metrics --------------------------------------------------------------

  py::class_<RocPoint>(m, "RocPoint")
      .def_readonly("threshold", &RocPoint::threshold)
      .def_readonly("far", &RocPoint::far)
      .def_readonly("frr", &RocPoint::frr);

  py::class_<EerResult>(m, "EerResult")
      .def_readonly("eer", &EerResult::eer)
      .def_readonly("threshold", &EerResult::threshold)
      .def_readonly("far_at_t", &EerResult::far_at_t)
      .def_readonly("frr_at_t", &EerResult::frr_at_t);

  py::class_<SliceMetrics>(m, "SliceMetrics")
      .def_readonly("eer", &SliceMetrics::eer)
      .def_readonly("far", &SliceMetrics::far)
      .def_readonly("frr", &SliceMetrics::frr);

  py::class_<GroupMetrics>(m, "GroupMetrics")
      .def_readonly("overall", &GroupMetrics::overall)
      .def_readonly("by_group", &GroupMetrics::by_group)
      .def_readonly("by_bucket", &GroupMetrics::by_bucket)
      .def_readonly("by_gender", &GroupMetrics::by_gender);

  py::class_<DisparityReport>(m, "DisparityReport")
      .def_readonly("ds_young_old", &DisparityReport::ds_young_old)
      .def_readonly("ds_male_female", &DisparityReport::ds_male_female)
      .def_readonly("pairwise", &DisparityReport::pairwise);

  py::class_<TTestResult>(m, "TTestResult")
      .def_readonly("t_statistic", &TTestResult::t_statistic)
      .def_readonly("degrees_of_freedom", &TTestResult::degrees_of_freedom)
      .def_readonly("p_value", &TTestResult::p_value)
      .def_readonly("significant_at_05", &TTestResult::significant_at_05);

  py::class_<EpochSeries>(m, "EpochSeries")
      .def(py::init<>())
      .def_readwrite("eer_by_slice", &EpochSeries::eer_by_slice);

  m.def(
      "sweep_roc",
      [](const std::vector<ScoreRecord>& records) { return sweep_roc(records); },
      py::arg("records"));
  m.def(
      "compute_eer",
      [](const std::vector<ScoreRecord>& records) {
        return compute_eer(records);
      },
      py::arg("records"));
  m.def(
      "far_at",
      [](const std::vector<ScoreRecord>& records, double threshold) {
        return far_at(records, threshold);
      },
      py::arg("records"), py::arg("threshold"));
  m.def(
      "frr_at",
      [](const std::vector<ScoreRecord>& records, double threshold) {
        return frr_at(records, threshold);
      },
      py::arg("records"), py::arg("threshold"));
  m.def("disparity", &disparity, py::arg("eer_a"), py::arg("eer_b"));
  m.def("evaluate", &evaluate, py::arg("scorefile"));
  m.def(
      "paired_ttest",
      [](const std::vector<double>& xs, const std::vector<double>& ys) {
        return paired_ttest(xs, ys);
      },
      py::arg("xs"), py::arg("ys"));
  m.def("epoch_series", &epoch_series, py::arg("scorefiles"));

  // --- synth ----------------------------------------------------------------

  py::class_<GroupScoreParams>(m, "GroupScoreParams")
      .def(py::init<>())
      .def_readwrite("genuine_mean", &GroupScoreParams::genuine_mean)
      .def_readwrite("genuine_sd", &GroupScoreParams::genuine_sd)
      .def_readwrite("impostor_mean", &GroupScoreParams::impostor_mean)
      .def_readwrite("impostor_sd", &GroupScoreParams::impostor_sd)
      .def_readwrite("n_genuine", &GroupScoreParams::n_genuine)
      .def_readwrite("n_impostor", &GroupScoreParams::n_impostor);

  py::class_<GroupScoreSpec>(m, "GroupScoreSpec")
      .def(py::init<>())
      .def_readwrite("groups", &GroupScoreSpec::groups);

  m.def("synth_scores", &synth_scores, py::arg("spec"), py::arg("seed"));
  m.def("synth_embeddings", &synth_embeddings, py::arg("roster"),
        py::arg("index"), py::arg("dim"), py::arg("default_spread"),
        py::arg("seed"), py::arg("spreads") = std::map<GroupKey, double>{});

  // --- report ---------------------------------------------------------------

  py::class_<ResultRow>(m, "ResultRow")
      .def(py::init<>())
      .def_readwrite("train_file_id", &ResultRow::train_file_id)
      .def_readwrite("test_file_id", &ResultRow::test_file_id)
      .def_readwrite("training_accuracy", &ResultRow::training_accuracy)
      .def_readwrite("eer", &ResultRow::eer)
      .def_readwrite("eer_old", &ResultRow::eer_old)
      .def_readwrite("eer_young", &ResultRow::eer_young)
      .def_readwrite("eer_female", &ResultRow::eer_female)
      .def_readwrite("eer_male", &ResultRow::eer_male)
      .def_readwrite("ds_young_old", &ResultRow::ds_young_old)
      .def_readwrite("ds_male_female", &ResultRow::ds_male_female);

  m.def("emit_table", &emit_table, py::arg("rows"), py::arg("format"));
  m.def("parse_table_csv", &parse_table_csv, py::arg("text"));
  m.def("emit_series", &emit_series, py::arg("series"));
  m.def("parse_series", &parse_series, py::arg("text"));

  // --- misc -----------------------------------------------------------------

  m.def("derive_seed",
        py::overload_cast<std::uint64_t, std::string_view>(&derive_seed),
        py::arg("master"), py::arg("tag"));
}
