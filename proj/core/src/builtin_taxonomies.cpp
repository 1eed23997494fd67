// Copyright 2026 The sgnet Authors
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

#include <array>
#include <mutex>

#include "sgnet/errors.hpp"
#include "sgnet/taxonomy.hpp"

namespace sgnet {
namespace {

// Super-class order matches the coarse label indices of the CIFAR-100
// binary files; finer_order matches the fine label indices.
constexpr const char* kCifar100Document = R"json({
  "name": "cifar100",
  "supers": [
    {"name": "aquatic mammals", "finers": ["beaver", "dolphin", "otter", "seal", "whale"]},
    {"name": "fish", "finers": ["aquarium_fish", "flatfish", "ray", "shark", "trout"]},
    {"name": "flowers", "finers": ["orchid", "poppy", "rose", "sunflower", "tulip"]},
    {"name": "food containers", "finers": ["bottle", "bowl", "can", "cup", "plate"]},
    {"name": "fruit and vegetables", "finers": ["apple", "mushroom", "orange", "pear", "sweet_pepper"]},
    {"name": "household electrical devices", "finers": ["clock", "keyboard", "lamp", "telephone", "television"]},
    {"name": "household furniture", "finers": ["bed", "chair", "couch", "table", "wardrobe"]},
    {"name": "insects", "finers": ["bee", "beetle", "butterfly", "caterpillar", "cockroach"]},
    {"name": "large carnivores", "finers": ["bear", "leopard", "lion", "tiger", "wolf"]},
    {"name": "large man-made outdoor things", "finers": ["bridge", "castle", "house", "road", "skyscraper"]},
    {"name": "large natural outdoor scenes", "finers": ["cloud", "forest", "mountain", "plain", "sea"]},
    {"name": "large omnivores and herbivores", "finers": ["camel", "cattle", "chimpanzee", "elephant", "kangaroo"]},
    {"name": "medium-sized mammals", "finers": ["fox", "porcupine", "possum", "raccoon", "skunk"]},
    {"name": "non-insect invertebrates", "finers": ["crab", "lobster", "snail", "spider", "worm"]},
    {"name": "people", "finers": ["baby", "boy", "girl", "man", "woman"]},
    {"name": "reptiles", "finers": ["crocodile", "dinosaur", "lizard", "snake", "turtle"]},
    {"name": "small mammals", "finers": ["hamster", "mouse", "rabbit", "shrew", "squirrel"]},
    {"name": "trees", "finers": ["maple_tree", "oak_tree", "palm_tree", "pine_tree", "willow_tree"]},
    {"name": "vehicles 1", "finers": ["bicycle", "bus", "motorcycle", "pickup_truck", "train"]},
    {"name": "vehicles 2", "finers": ["lawn_mower", "rocket", "streetcar", "tank", "tractor"]}
  ],
  "finer_order": [
    "apple", "aquarium_fish", "baby", "bear", "beaver", "bed", "bee", "beetle", "bicycle", "bottle",
    "bowl", "boy", "bridge", "bus", "butterfly", "camel", "can", "castle", "caterpillar", "cattle",
    "chair", "chimpanzee", "clock", "cloud", "cockroach", "couch", "crab", "crocodile", "cup", "dinosaur",
    "dolphin", "elephant", "flatfish", "forest", "fox", "girl", "hamster", "house", "kangaroo", "keyboard",
    "lamp", "lawn_mower", "leopard", "lion", "lizard", "lobster", "man", "maple_tree", "motorcycle", "mountain",
    "mouse", "mushroom", "oak_tree", "orange", "orchid", "otter", "palm_tree", "pear", "pickup_truck", "pine_tree",
    "plain", "plate", "poppy", "porcupine", "possum", "rabbit", "raccoon", "ray", "road", "rocket",
    "rose", "sea", "seal", "shark", "shrew", "skunk", "skyscraper", "snail", "snake", "spider",
    "squirrel", "streetcar", "sunflower", "sweet_pepper", "table", "tank", "telephone", "television", "tiger", "tractor",
    "train", "trout", "tulip", "turtle", "wardrobe", "whale", "willow_tree", "wolf", "woman", "worm"
  ]
})json";

// Finer order is the 80-category detection label order.
constexpr const char* kCocoDocument = R"json({
  "name": "coco",
  "supers": [
    {"name": "person", "finers": ["person"]},
    {"name": "vehicle", "finers": ["bicycle", "car", "motorcycle", "airplane", "bus", "train", "truck", "boat"]},
    {"name": "outdoor", "finers": ["traffic light", "fire hydrant", "stop sign", "parking meter", "bench"]},
    {"name": "animal", "finers": ["bird", "cat", "dog", "horse", "sheep", "cow", "elephant", "bear", "zebra", "giraffe"]},
    {"name": "accessory", "finers": ["backpack", "umbrella", "handbag", "tie", "suitcase"]},
    {"name": "sports", "finers": ["frisbee", "skis", "snowboard", "sports ball", "kite", "baseball bat", "baseball glove", "skateboard", "surfboard", "tennis racket"]},
    {"name": "kitchen", "finers": ["bottle", "wine glass", "cup", "fork", "knife", "spoon", "bowl"]},
    {"name": "food", "finers": ["banana", "apple", "sandwich", "orange", "broccoli", "carrot", "hot dog", "pizza", "donut", "cake"]},
    {"name": "furniture", "finers": ["chair", "couch", "potted plant", "bed", "dining table", "toilet"]},
    {"name": "electronic", "finers": ["tv", "laptop", "mouse", "remote", "keyboard", "cell phone"]},
    {"name": "appliance", "finers": ["microwave", "oven", "toaster", "sink", "refrigerator"]},
    {"name": "indoor", "finers": ["book", "clock", "vase", "scissors", "teddy bear", "hair drier", "toothbrush"]}
  ]
})json";

constexpr std::array<std::pair<std::string_view, std::string_view>, 24> kCifarSpellings{{
    {"aquarium fish", "aquarium_fish"},
    {"orchids", "orchid"},
    {"poppies", "poppy"},
    {"roses", "rose"},
    {"sunflowers", "sunflower"},
    {"tulips", "tulip"},
    {"bottles", "bottle"},
    {"bowls", "bowl"},
    {"cans", "can"},
    {"cups", "cup"},
    {"plates", "plate"},
    {"apples", "apple"},
    {"mushrooms", "mushroom"},
    {"oranges", "orange"},
    {"pears", "pear"},
    {"sweet peppers", "sweet_pepper"},
    {"computer keyboard", "keyboard"},
    {"maple", "maple_tree"},
    {"oak", "oak_tree"},
    {"palm", "palm_tree"},
    {"pine", "pine_tree"},
    {"willow", "willow_tree"},
    {"pickup truck", "pickup_truck"},
    {"lawn-mower", "lawn_mower"},
}};

}  // namespace

const Taxonomy& cifar100_taxonomy() {
  static const Taxonomy t = load_taxonomy(std::string_view(kCifar100Document));
  return t;
}

const Taxonomy& coco_taxonomy() {
  static const Taxonomy t = load_taxonomy(std::string_view(kCocoDocument));
  return t;
}

const Taxonomy& builtin_taxonomy(std::string_view name) {
  if (name == "cifar100" || name == "cifar-100") return cifar100_taxonomy();
  if (name == "coco" || name == "mscoco") return coco_taxonomy();
  throw LookupError("unknown builtin taxonomy '" + std::string(name) + "' (expected cifar100 or coco)");
}

std::vector<std::string> builtin_taxonomy_names() { return {"cifar100", "coco"}; }

std::span<const std::pair<std::string_view, std::string_view>> cifar100_table_spellings() {
  return kCifarSpellings;
}

}  // namespace sgnet
