// Copyright 2026 The hopkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Bundled defaults: filler sentence pool, related-sentence templates,
// inversion lexicon and first-hop question templates.

#include <map>
#include <string>
#include <vector>

#include "hopkit/adversarial.h"
#include "hopkit/debias.h"

namespace hopkit {

namespace debias {

const SentencePool& DefaultSentencePool() {
  static const SentencePool* pool = new SentencePool(
      {
      "The morning fog usually lifts from the valley floor a little before the first buses arrive.",
      "Fresh bread keeps its crust longer when it is stored in a paper bag rather than plastic.",
      "A small garden can produce a surprising amount of food when the beds are planned with care.",
      "Most kettles switch themselves off once the water inside has reached a steady rolling boil.",
      "Walking for half an hour after dinner is a habit that many families share in the summer.",
      "Rain tends to arrive in the afternoon during the warmer months in many coastal towns.",
      "The old wooden bench near the pond is a popular place to sit and read on weekends.",
      "Tomatoes ripen faster when they are kept on a sunny windowsill away from the cold.",
      "A good pair of boots can make a long hike through muddy fields far more pleasant.",
      "Many people find that a short list written the night before makes the next morning calmer.",
      "The library on the corner extends its opening hours during the weeks before school exams.",
      "Bicycles left outside through the winter often need their chains oiled before the spring.",
      "Soup made from leftover vegetables is a simple way to reduce waste in a busy kitchen.",
      "Children in the neighborhood often gather at the park when the weather turns mild and dry.",
      "The train to the coast is usually quieter on weekday mornings than on holiday weekends.",
      "Houseplants with broad leaves generally need less direct sunlight than those with narrow leaves.",
      "A cup of tea in the afternoon is a small ritual that helps many people slow down.",
      "Old maps are often framed and hung in hallways as a reminder of places once visited.",
      "Snow on the hills tends to melt first on the slopes that face toward the south.",
      "Many bakeries sell their remaining loaves at a discount shortly before they close for the day.",
      "The river path is lit by lamps so that people can walk there safely after dark.",
      "Cats often choose the warmest spot in the house and return to it every single afternoon.",
      "A well organized drawer can save several minutes of searching on a hectic weekday morning.",
      "The local market opens early on Saturdays so that farmers can sell their produce while fresh.",
      "Painting a room a lighter color can make a small space feel noticeably larger and brighter.",
      "Many hikers carry a spare pair of socks in case they need to cross a shallow stream.",
      "The smell of cut grass is one of the most familiar signs that summer has finally arrived.",
      "Birds gather around feeders more often during cold spells when natural food is harder to find.",
      "A jar of homemade jam makes a thoughtful gift for neighbors during the autumn months.",
      "Some people prefer to write letters by hand because it feels more personal than typing.",
      "The clock in the town square is wound by hand once a week by a volunteer.",
      "Leaving shoes by the front door helps keep the floors inside cleaner through the rainy season.",
      "A quiet room with good light is often the best place to work on a long puzzle.",
      "Many gardeners save seeds from their strongest plants to sow again in the following spring.",
      "The ferry across the bay runs less often in winter when there are fewer visitors about.",
      "Warm socks and a blanket can make a chilly evening at home feel much more comfortable.",
      "Apples stored in a cool and dark place can stay crisp for several weeks after picking.",
      "The path along the cliffs offers wide views of the sea on clear and windy days.",
      "A simple meal shared with friends is often remembered longer than an expensive dinner out.",
      "Kites fly best on open beaches where the wind blows steadily from one direction.",
      },
      "hopkit-neutral-pool-v1");
  return *pool;
}

const TemplateSet& DefaultTemplates() {
  static const TemplateSet* templates = new TemplateSet({
      {"film",
       {"#Name is a nice film.", "#Name is a film that many people enjoyed.",
        "Many viewers remember #Name as a memorable film."}},
      {"person",
       {"#Name is a well-known person.", "Many people have heard of #Name.",
        "#Name is a person with an interesting life."}},
      {"magazine",
       {"#Name is a popular magazine.", "Many readers enjoy #Name.",
        "#Name is a magazine with a loyal readership."}},
      {"album",
       {"#Name is a nice album.", "Many listeners enjoy #Name.",
        "#Name is an album that many people remember."}},
      {"generic",
       {"#Name is well known.", "Many people have heard of #Name.",
        "#Name is an interesting topic."}},
  });
  return *templates;
}

}  // namespace debias

namespace adversarial {

const InversionLexicon& DefaultLexicon() {
  using R = AnswerRule;
  static const InversionLexicon* lexicon = new InversionLexicon({
      {"first", "later", R::kFlipCandidate},
      {"earlier", "more recently", R::kFlipCandidate},
      {"older", "younger", R::kFlipCandidate},
      {"more", "less", R::kFlipCandidate},
      {"longer", "shorter", R::kFlipCandidate},
      {"larger", "smaller", R::kFlipCandidate},
      {"higher", "lower", R::kFlipCandidate},
      {"the same country", "different countries", R::kFlipYesNo},
      {"the same nationality", "different nationalities", R::kFlipYesNo},
      {"the same", "different", R::kFlipYesNo},
  });
  return *lexicon;
}

const RelationQuestionTemplates& DefaultRelationTemplates() {
  static const RelationQuestionTemplates* templates =
      new RelationQuestionTemplates({
      {"father", "Who is the father of #Subject?"},
      {"mother", "Who is the mother of #Subject?"},
      {"spouse", "Who is the spouse of #Subject?"},
      {"child", "Who is the child of #Subject?"},
      {"sibling", "Who is the sibling of #Subject?"},
      {"director", "Who is the director of #Subject?"},
      {"producer", "Who is the producer of #Subject?"},
      {"composer", "Who is the composer of #Subject?"},
      {"performer", "Who is the performer of #Subject?"},
      {"editor", "Who is the editor of #Subject?"},
      {"screenwriter", "Who is the screenwriter of #Subject?"},
      {"cast member", "Who is a cast member of #Subject?"},
      {"creator", "Who is the creator of #Subject?"},
      {"founded by", "Who founded #Subject?"},
      {"publisher", "Who is the publisher of #Subject?"},
      {"manufacturer", "Who is the manufacturer of #Subject?"},
      {"presenter", "Who is the presenter of #Subject?"},
      {"doctoral advisor", "Who is the doctoral advisor of #Subject?"},
      {"student of", "Whose student was #Subject?"},
      {"date of birth", "When was #Subject born?"},
      {"date of death", "When did #Subject die?"},
      {"place of birth", "Where was #Subject born?"},
      {"place of death", "Where did #Subject die?"},
      {"place of burial", "Where was #Subject buried?"},
      {"place of detention", "Where was #Subject detained?"},
      {"cause of death", "What was the cause of death of #Subject?"},
      {"country of citizenship", "Which country is #Subject a citizen of?"},
      {"country", "Which country is #Subject in?"},
      {"country of origin", "What is the country of origin of #Subject?"},
      {"educated at", "Where was #Subject educated?"},
      {"award received", "Which award did #Subject receive?"},
      {"employer", "Who is the employer of #Subject?"},
      {"occupation", "What is the occupation of #Subject?"},
      {"publication date", "When was #Subject published?"},
      {"inception", "When was #Subject founded?"},
      {"located in the administrative territorial entity", "Where is #Subject located?"},
      });
  return *templates;
}

}  // namespace adversarial

}  // namespace hopkit
