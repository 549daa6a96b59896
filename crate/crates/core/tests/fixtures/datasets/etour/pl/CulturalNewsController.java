public class CulturalNewsController {
    public void exportCultural(Cultural cultural) {
        culturalStore.export(cultural);
    }
    public void approveNews(News news) {
        newsStore.approve(news);
    }
    public void validateNews(News news) {
        newsStore.validate(news);
    }
}
