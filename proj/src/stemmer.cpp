#include "cams/stemmer.hpp"

#include <cctype>

namespace cams {

namespace {

bool is_consonant(const std::string& w, int i) {
    char c = w[i];
    if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') return false;
    if (c == 'y') return i == 0 ? true : !is_consonant(w, i - 1);
    return true;
}

// Number of VC sequences in w[0..end].
int measure(const std::string& w, int end) {
    int n = 0;
    int i = 0;
    while (i <= end && is_consonant(w, i)) ++i;
    while (i <= end) {
        while (i <= end && !is_consonant(w, i)) ++i;
        if (i > end) break;
        ++n;
        while (i <= end && is_consonant(w, i)) ++i;
    }
    return n;
}

bool has_vowel(const std::string& w, int end) {
    for (int i = 0; i <= end; ++i)
        if (!is_consonant(w, i)) return true;
    return false;
}

bool double_consonant(const std::string& w, int i) {
    return i >= 1 && w[i] == w[i - 1] && is_consonant(w, i);
}

// consonant-vowel-consonant ending, last consonant not w/x/y
bool cvc(const std::string& w, int i) {
    if (i < 2) return false;
    if (!is_consonant(w, i) || is_consonant(w, i - 1) || !is_consonant(w, i - 2))
        return false;
    char c = w[i];
    return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(const std::string& w, const std::string& suffix) {
    return w.size() >= suffix.size() &&
           w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// stem length (index of the last stem character) once `suffix` is removed
int stem_end(const std::string& w, const std::string& suffix) {
    return static_cast<int>(w.size() - suffix.size()) - 1;
}

void replace_suffix(std::string& w, const std::string& suffix, const std::string& repl) {
    w.replace(w.size() - suffix.size(), suffix.size(), repl);
}

void step1(std::string& w) {
    // 1a
    if (ends_with(w, "sses")) replace_suffix(w, "sses", "ss");
    else if (ends_with(w, "ies")) replace_suffix(w, "ies", "i");
    else if (ends_with(w, "ss")) {}
    else if (ends_with(w, "s")) w.pop_back();

    // 1b
    bool cleanup = false;
    if (ends_with(w, "eed")) {
        if (measure(w, stem_end(w, "eed")) > 0) replace_suffix(w, "eed", "ee");
    } else if (ends_with(w, "ed") && has_vowel(w, stem_end(w, "ed"))) {
        replace_suffix(w, "ed", "");
        cleanup = true;
    } else if (ends_with(w, "ing") && has_vowel(w, stem_end(w, "ing"))) {
        replace_suffix(w, "ing", "");
        cleanup = true;
    }
    if (cleanup) {
        if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
            w.push_back('e');
        } else if (double_consonant(w, static_cast<int>(w.size()) - 1)) {
            char c = w.back();
            if (c != 'l' && c != 's' && c != 'z') w.pop_back();
        } else if (measure(w, static_cast<int>(w.size()) - 1) == 1 &&
                   cvc(w, static_cast<int>(w.size()) - 1)) {
            w.push_back('e');
        }
    }

    // 1c
    if (ends_with(w, "y") && has_vowel(w, static_cast<int>(w.size()) - 2))
        w.back() = 'i';
}

struct Rule {
    const char* from;
    const char* to;
};

void apply_rules(std::string& w, const Rule* rules, int n, int min_measure) {
    for (int i = 0; i < n; ++i) {
        std::string from = rules[i].from;
        if (ends_with(w, from)) {
            if (measure(w, stem_end(w, from)) > min_measure - 1)
                replace_suffix(w, from, rules[i].to);
            return;  // longest-match rule consumed, even if measure failed
        }
    }
}

void step2(std::string& w) {
    static const Rule rules[] = {
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
        {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},   {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
    };
    apply_rules(w, rules, sizeof(rules) / sizeof(Rule), 1);
}

void step3(std::string& w) {
    static const Rule rules[] = {
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    };
    apply_rules(w, rules, sizeof(rules) / sizeof(Rule), 1);
}

void step4(std::string& w) {
    static const Rule rules[] = {
        {"al", ""},   {"ance", ""}, {"ence", ""}, {"er", ""},  {"ic", ""},
        {"able", ""}, {"ible", ""}, {"ant", ""},  {"ement", ""}, {"ment", ""},
        {"ent", ""},  {"ou", ""},   {"ism", ""},  {"ate", ""}, {"iti", ""},
        {"ous", ""},  {"ive", ""},  {"ize", ""},
    };
    for (auto& rule : rules) {
        std::string from = rule.from;
        if (ends_with(w, from)) {
            if (measure(w, stem_end(w, from)) > 1) replace_suffix(w, from, "");
            return;
        }
    }
    // special case: -(s|t)ion
    if (ends_with(w, "ion")) {
        int e = stem_end(w, "ion");
        if (e >= 0 && (w[e] == 's' || w[e] == 't') && measure(w, e) > 1)
            replace_suffix(w, "ion", "");
    }
}

void step5(std::string& w) {
    if (ends_with(w, "e")) {
        int e = static_cast<int>(w.size()) - 2;
        int m = measure(w, e);
        if (m > 1 || (m == 1 && !cvc(w, e))) w.pop_back();
    }
    int last = static_cast<int>(w.size()) - 1;
    if (ends_with(w, "ll") && measure(w, last) > 1) w.pop_back();
}

}  // namespace

std::string porter_stem(const std::string& word) {
    if (word.size() <= 2) return word;
    for (unsigned char c : word)
        if (c >= 128 || !std::isalpha(c)) return word;

    std::string w = word;
    step1(w);
    step2(w);
    step3(w);
    step4(w);
    step5(w);
    return w;
}

}  // namespace cams
