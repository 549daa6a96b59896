public class RatingNewsDao {
    public void removeNews(News news) {
        newsStore.remove(news);
    }
    public void addRating(Rating rating) {
        ratingStore.add(rating);
    }
    public void validateNews(News news) {
        newsStore.validate(news);
    }
    public void removeRating(Rating rating) {
        ratingStore.remove(rating);
    }
}
