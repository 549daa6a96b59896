public class TagRatingService {
    public void assignRating(Rating rating) {
        ratingStore.assign(rating);
    }
    public void validateTag(Tag tag) {
        tagStore.validate(tag);
    }
    public void saveTag(Tag tag) {
        tagStore.save(tag);
    }
    public void addTag(Tag tag) {
        tagStore.add(tag);
    }
}
