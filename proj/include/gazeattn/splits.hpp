#pragma once

#include <set>
#include <string>
#include <vector>

#include "gazeattn/errors.hpp"
#include "gazeattn/manifest.hpp"

namespace gazeattn {

template <class Record>
struct SubjectSplit {
  Manifest<Record> train;
  Manifest<Record> val;
};

/// Exact subject-wise partition: every record of a held-out subject goes to
/// `val`, everything else to `train`. Throws UnknownSubject if `held_out`
/// names a subject that is not in the manifest.
template <class Record>
SubjectSplit<Record> split_by_subject(const Manifest<Record>& manifest,
                                      const std::set<std::string>& held_out) {
  const auto subs = subjects_of(manifest);
  const std::set<std::string> known(subs.begin(), subs.end());
  for (const auto& s : held_out)
    if (!known.count(s))
      throw UnknownSubject("held-out subject not in manifest: " + s);

  SubjectSplit<Record> split;
  split.train.schema_version = manifest.schema_version;
  split.train.base_dir = manifest.base_dir;
  split.val.schema_version = manifest.schema_version;
  split.val.base_dir = manifest.base_dir;
  for (const auto& r : manifest.records)
    (held_out.count(r.subject) ? split.val : split.train).records.push_back(r);
  return split;
}

template <class Record>
struct LosoFold {
  std::string held_out_subject;
  Manifest<Record> train;
  Manifest<Record> test;
};

/// One fold per subject, ordered by subject identifier. Fold i's test set is
/// exactly subject i's records; its train set is everyone else's.
template <class Record>
std::vector<LosoFold<Record>> loso_folds(const Manifest<Record>& manifest) {
  const auto subs = subjects_of(manifest);
  if (subs.size() < 2)
    throw TooFewSubjects("leave-one-subject-out needs at least 2 subjects, got " +
                         std::to_string(subs.size()));
  std::vector<LosoFold<Record>> folds;
  folds.reserve(subs.size());
  for (const auto& s : subs) {
    auto split = split_by_subject(manifest, {s});
    folds.push_back({s, std::move(split.train), std::move(split.val)});
  }
  return folds;
}

}  // namespace gazeattn
