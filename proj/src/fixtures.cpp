#include "confpred/fixtures.hpp"

namespace confpred {

// 20 tree heights; the final row is the one the worked predictions target.
const std::string& czuber_csv() {
  static const std::string text =
      "z\n"
      "17\n20\n10\n17\n12\n15\n19\n22\n17\n19\n"
      "14\n22\n18\n17\n13\n12\n18\n15\n17\n16\n";
  return text;
}

const std::string& czuber_meta() {
  static const std::string text =
      "{\n"
      "  \"label_column\": \"z\",\n"
      "  \"label_kind\": \"real\",\n"
      "  \"grid_step\": 1.0,\n"
      "  \"grid_origin\": 0.0\n"
      "}\n";
  return text;
}

// 25 iris flowers (setosa / versicolor), final row again the prediction target.
const std::string& iris25_csv() {
  static const std::string text =
      "sepal_length,petal_width,species\n"
      "5.0,0.3,setosa\n"
      "4.4,0.2,setosa\n"
      "4.9,0.2,setosa\n"
      "4.4,0.2,setosa\n"
      "5.1,0.4,setosa\n"
      "5.9,1.5,versicolor\n"
      "5.0,0.2,setosa\n"
      "6.4,1.3,versicolor\n"
      "6.7,1.4,versicolor\n"
      "6.2,1.5,versicolor\n"
      "5.1,0.2,setosa\n"
      "4.6,0.2,setosa\n"
      "5.0,0.6,setosa\n"
      "5.4,0.4,setosa\n"
      "5.0,1.0,versicolor\n"
      "6.7,1.7,versicolor\n"
      "5.8,1.2,versicolor\n"
      "5.5,0.2,setosa\n"
      "5.8,1.0,versicolor\n"
      "5.4,0.4,setosa\n"
      "5.1,0.3,setosa\n"
      "5.7,1.3,versicolor\n"
      "4.6,0.3,setosa\n"
      "4.6,0.2,setosa\n"
      "6.8,1.4,versicolor\n";
  return text;
}

const std::string& iris25_meta() {
  static const std::string text =
      "{\n"
      "  \"label_column\": \"species\",\n"
      "  \"label_kind\": \"categorical\",\n"
      "  \"grid_step\": 0.1,\n"
      "  \"grid_origin\": 0.0\n"
      "}\n";
  return text;
}

Dataset fixture_czuber() { return ingest_text(czuber_csv(), czuber_meta(), "czuber.csv"); }

Dataset fixture_iris25() { return ingest_text(iris25_csv(), iris25_meta(), "iris25.csv"); }

}  // namespace confpred
