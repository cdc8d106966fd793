#include <gtest/gtest.h>

#include <cmath>

#include "ufi/csv.hpp"

using namespace ufi;

namespace {

Schema schema_for(std::string target, Task task) {
  Schema s;
  s.target = std::move(target);
  s.task = task;
  return s;
}

}  // namespace

TEST(Csv, ThreeRowBinaryTarget) {
  const auto loaded =
      parse_csv("x,y\n1.5,no\n2.5,yes\n3.5,no\n",
                schema_for("y", Task::classification));
  EXPECT_EQ(loaded.data.n_rows(), 3u);
  EXPECT_EQ(loaded.data.n_features(), 1u);
  EXPECT_EQ(loaded.data.n_classes(), 2);
  EXPECT_EQ(loaded.class_labels, (std::vector<std::string>{"no", "yes"}));
  EXPECT_EQ(loaded.data.label(1), 1);
}

TEST(Csv, EmptyCellIsMissingValue) {
  try {
    parse_csv("a,b,y\n1,2,0\n3,,1\n", schema_for("y", Task::classification));
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_STREQ(e.what(), "missing value at row 2, column 'b'");
  }
  EXPECT_THROW(parse_csv("a,y\nNA,1\n", schema_for("y", Task::regression)),
               DataError);
  EXPECT_THROW(parse_csv("a,y\n?,1\n", schema_for("y", Task::regression)),
               DataError);
}

TEST(Csv, ParseFailureNamesRowAndColumn) {
  try {
    parse_csv("a,y\n1,2\nabc,3\n", schema_for("y", Task::regression));
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("'a'"), std::string::npos);
  }
}

TEST(Csv, HousingShapedRegression) {
  std::string text =
      "CRIM,ZN,INDUS,CHAS,NOX,RM,AGE,DIS,RAD,TAX,PTRATIO,B,LSTAT,MEDV\n";
  text += "0.00632,18,2.31,0,0.538,6.575,65.2,4.09,1,296,15.3,396.9,4.98,24\n";
  text += "0.02731,0,7.07,0,0.469,6.421,78.9,4.9671,2,242,17.8,396.9,9.14,21.6\n";
  text += "0.02729,0,7.07,1,0.469,7.185,61.1,4.9671,2,242,17.8,392.83,4.03,34.7\n";
  Schema s = schema_for("MEDV", Task::regression);
  s.kinds["CHAS"] = FeatureKind::Tag::binary;
  s.kinds["RAD"] = FeatureKind::Tag::ordinal;
  const auto loaded = parse_csv(text, s);
  EXPECT_EQ(loaded.data.n_features(), 13u);
  EXPECT_EQ(loaded.data.task(), Task::regression);
  EXPECT_EQ(loaded.data.kinds()[3], FeatureKind::binary());
  EXPECT_EQ(loaded.data.value(2, 3), 1.0);
  EXPECT_DOUBLE_EQ(loaded.data.target()[1], 21.6);
}

TEST(Csv, CategoricalLevelsByFirstAppearance) {
  Schema s = schema_for("y", Task::regression);
  s.kinds["c"] = FeatureKind::Tag::categorical;
  const auto loaded = parse_csv("c,y\nred,1\nblue,2\nred,3\ngreen,4\n", s);
  EXPECT_EQ(loaded.data.levels()[0],
            (std::vector<std::string>{"red", "blue", "green"}));
  EXPECT_EQ(loaded.data.kinds()[0], FeatureKind::categorical(3));
  EXPECT_EQ(loaded.data.value(3, 0), 2.0);
}

TEST(Csv, FixedLevelsRejectUnknownCategory) {
  Schema s = schema_for("y", Task::regression);
  s.kinds["c"] = FeatureKind::Tag::categorical;
  s.levels["c"] = {"a", "b"};
  EXPECT_THROW(parse_csv("c,y\na,1\nz,2\n", s), DataError);
}

TEST(Csv, UnknownClassLabel) {
  Schema s = schema_for("y", Task::classification);
  s.classes = {"no", "yes"};
  EXPECT_THROW(parse_csv("x,y\n1,no\n2,maybe\n", s), DataError);
}

TEST(Csv, NumericClassLabelsSortNumerically) {
  const auto loaded = parse_csv("x,y\n1,10\n2,9\n3,10\n",
                                schema_for("y", Task::classification));
  EXPECT_EQ(loaded.class_labels, (std::vector<std::string>{"9", "10"}));
}

TEST(Csv, QuotedFieldsBomAndDrop) {
  Schema s = schema_for("y", Task::regression);
  s.drop = {"id"};
  s.kinds["c"] = FeatureKind::Tag::categorical;
  const auto loaded = parse_csv(
      "\xEF\xBB\xBFid,c,y\n1,\"a,b\",1.0\n2,\"c\"\"d\",2\n\n3,\"a,b\",3\n", s);
  EXPECT_EQ(loaded.data.n_features(), 1u);
  EXPECT_EQ(loaded.data.n_rows(), 3u);
  EXPECT_EQ(loaded.data.levels()[0], (std::vector<std::string>{"a,b", "c\"d"}));
}

TEST(Csv, MissingTargetColumn) {
  EXPECT_THROW(parse_csv("a,b\n1,2\n", schema_for("y", Task::regression)),
               DataError);
}

TEST(Csv, RaggedRow) {
  EXPECT_THROW(parse_csv("a,y\n1,2,3\n", schema_for("y", Task::regression)),
               DataError);
}

TEST(Csv, ReferenceSharesCodes) {
  Schema s = schema_for("y", Task::classification);
  s.kinds["c"] = FeatureKind::Tag::categorical;
  const auto train = parse_csv("c,y\nb,yes\na,no\n", s);
  const auto ref = make_reference(train);
  const auto test = parse_csv("c,y\na,yes\n", s, &ref);
  EXPECT_EQ(test.data.value(0, 0), 1.0);
  EXPECT_EQ(test.data.kinds()[0], FeatureKind::categorical(2));
  EXPECT_EQ(test.data.label(0), 1);
}

TEST(Schema, ParsesSidecar) {
  const auto s = parse_schema(R"({"target": "y", "task": "regression",
      "columns": {"a": "ordinal", "c": {"kind": "categorical", "levels": ["x", "y"]}},
      "drop": ["id"]})");
  EXPECT_EQ(s.target, "y");
  EXPECT_EQ(s.task, Task::regression);
  EXPECT_EQ(s.kinds.at("a"), FeatureKind::Tag::ordinal);
  EXPECT_EQ(s.levels.at("c"), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(s.drop, (std::vector<std::string>{"id"}));
  EXPECT_THROW(parse_schema("{not json"), UsageError);
  EXPECT_THROW(parse_schema(R"({"target": "y", "columns": {"a": "weird"}})"),
               UsageError);
}

TEST(Csv, LoadedDataIsFiniteAfterEncoding) {
  Schema s = schema_for("y", Task::regression);
  s.kinds["c"] = FeatureKind::Tag::categorical;
  const auto loaded = parse_csv("x,c,y\n1e3,u,1\n-2.5,v,2\n", s);
  const auto enc = dummy_encode(loaded.data).first;
  for (std::size_t j = 0; j < enc.n_features(); ++j) {
    for (double v : enc.column(j)) EXPECT_TRUE(std::isfinite(v));
  }
}
